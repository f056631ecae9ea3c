// Timed execution playback. The clock lives in circuit nanoseconds; the wall
// mapping is wall_ms = ns * scale / 1e6. The default 1e7 slowdown renders a
// 300 ns layer over 3 s.
export const DEFAULT_SLOWDOWN = 1e7;

export class AnimationClock {
  clockNs = 0;
  playing = false;
  scale = DEFAULT_SLOWDOWN;
  private readonly totalNs: number;
  private readonly ends: number[] = [];

  constructor(readonly layerDurationsNs: number[]) {
    let acc = 0;
    for (const d of layerDurationsNs) {
      acc += d;
      this.ends.push(acc);
    }
    this.totalNs = acc;
  }

  get total(): number {
    return this.totalNs;
  }

  play(): void {
    if (this.clockNs >= this.totalNs) this.clockNs = 0; // replay from the top
    this.playing = true;
  }

  pause(): void {
    this.playing = false;
  }

  /** Advance by wall-clock milliseconds; clamps at the total duration. */
  tick(wallMs: number): void {
    if (!this.playing || wallMs <= 0) return;
    this.clockNs = Math.min(this.totalNs, this.clockNs + (wallMs * 1e6) / this.scale);
    if (this.clockNs >= this.totalNs) this.playing = false;
  }

  seek(ns: number): void {
    this.clockNs = Math.min(this.totalNs, Math.max(0, ns));
  }

  /** Index of the layer active at the current clock; -1 for an empty circuit.
   * Layers whose end time has passed render dimmed. */
  activeLayer(): number {
    if (this.ends.length === 0) return -1;
    for (let i = 0; i < this.ends.length; i++) {
      if (this.clockNs < this.ends[i]) return i;
    }
    return this.ends.length - 1;
  }

  finishedLayers(): number {
    let done = 0;
    for (const end of this.ends) if (this.clockNs >= end && end > 0) done++;
    if (this.clockNs >= this.totalNs) done = this.ends.length;
    return done;
  }

  get atEnd(): boolean {
    return this.clockNs >= this.totalNs;
  }
}
