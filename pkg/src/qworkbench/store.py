"""Directory-backed job store. Writes go through a temp directory and land via
atomic renames, so a crash never leaves a half-written bundle in the index."""
from __future__ import annotations

import os
import threading
import uuid
from pathlib import Path

from .errors import BundleError, WorkbenchError
from .jobdata import JobBundle, export_bundle, retrieve_bundle


class UnknownJobError(WorkbenchError):
    code = "unknown-job"


class JobStore:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._cache: dict[str, JobBundle] = {}
        self._index: dict[str, Path] = {}
        for path in sorted(self.directory.glob("*.qjob")):
            self._index[path.stem] = path

    def ids(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(sorted(self._index))

    def path_of(self, job_id: str) -> Path:
        with self._lock:
            try:
                return self._index[job_id]
            except KeyError:
                raise UnknownJobError(f"no job {job_id!r}", job_id=job_id)

    def get(self, job_id: str) -> JobBundle:
        with self._lock:
            if job_id in self._cache:
                return self._cache[job_id]
            path = self._index.get(job_id)
        if path is None:
            raise UnknownJobError(f"no job {job_id!r}", job_id=job_id)
        bundle = retrieve_bundle(path)
        with self._lock:
            self._cache[job_id] = bundle
        return bundle

    def save(self, bundle: JobBundle) -> Path:
        final = self.directory / f"{bundle.job_id}.qjob"
        staging = self.directory / f".staging-{uuid.uuid4().hex}"
        staging.mkdir(parents=True, exist_ok=True)
        try:
            written = export_bundle(bundle, staging / final.name)
            # sidecar first so the bundle never references a missing file
            for path in reversed(written):
                os.replace(path, self.directory / path.name)
        finally:
            for leftover in staging.glob("*"):
                leftover.unlink(missing_ok=True)
            staging.rmdir()
        with self._lock:
            self._index[bundle.job_id] = final
            self._cache[bundle.job_id] = bundle
        return final

    def summaries(self) -> list[dict]:
        out = []
        for job_id in self.ids():
            try:
                bundle = self.get(job_id)
            except BundleError as exc:
                out.append({"job_id": job_id, "error": exc.code})
                continue
            out.append({
                "job_id": bundle.job_id,
                "created_at": bundle.created_at.isoformat(),
                "machine_name": bundle.machine_name,
                "problem_kind": bundle.problem.kind if bundle.problem else None,
                "shots": bundle.shots,
                "noise": bundle.noise,
                "states": len(bundle.counts.entries),
            })
        return out
