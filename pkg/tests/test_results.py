import math

import numpy as np
import pytest

from qworkbench.circuit import CircuitBuilder
from qworkbench.errors import ResourceLimitError, ValidationError
from qworkbench.problems import ProblemSpec, build
from qworkbench.results import (find_period_and_factors, flip_probabilities,
                                hypothetical_error_adjustment, to_contingency,
                                to_image, to_integer_histogram, to_truth_table)
from qworkbench.simulate import Counts, RunConfig, probabilities, run

from conftest import make_snapshot


class TestIntegerHistogram:
    def test_binary_reading(self):
        hist = to_integer_histogram(Counts(shots=10, width=4, entries={"0100": 10}))
        assert hist.rows[0].value == 4
        assert hist.rows[0].count == 10
        assert hist.rows[0].frequency == 1.0

    def test_empty(self):
        hist = to_integer_histogram(Counts(shots=0, width=3, entries={}))
        assert hist.rows == ()

    def test_include_zero_materializes(self):
        hist = to_integer_histogram(Counts(shots=2, width=2, entries={"01": 2}),
                                    include_zero=True)
        assert [r.value for r in hist.rows] == [0, 1, 2, 3]
        assert sum(r.frequency for r in hist.rows) == pytest.approx(1.0)

    def test_width_guard(self):
        with pytest.raises(ResourceLimitError):
            to_integer_histogram(Counts(shots=1, width=21, entries={"0" * 21: 1}),
                                 include_zero=True)

    def test_shor_peaks(self):
        circuit = build(ProblemSpec(kind="shor", base=7, modulus=15)).circuit
        counts = run(circuit, RunConfig(shots=4096, seed=2))
        hist = to_integer_histogram(counts)
        assert {r.value for r in hist.rows} <= {0, 64, 128, 192}


class TestPeriodFinding:
    def test_seven_mod_fifteen(self):
        hist = to_integer_histogram(Counts(
            shots=400, width=8,
            entries={"00000000": 100, "01000000": 100,
                     "10000000": 100, "11000000": 100}))
        result = find_period_and_factors(hist, 7, 15)
        assert result.found
        assert result.period == 4
        assert result.factors == (3, 5)

    def test_peak_zero_alone_fails(self):
        hist = to_integer_histogram(Counts(shots=10, width=8,
                                           entries={"00000000": 10}))
        result = find_period_and_factors(hist, 7, 15)
        assert not result.found
        assert result.factors is None

    def test_four_mod_fifteen(self):
        # order 2: peaks at 0 and 128
        hist = to_integer_histogram(Counts(shots=20, width=8,
                                           entries={"00000000": 10, "10000000": 10}))
        result = find_period_and_factors(hist, 4, 15)
        assert result.period == 2
        assert result.factors == (3, 5)

    def test_invalid_inputs(self):
        hist = to_integer_histogram(Counts(shots=1, width=4, entries={"0001": 1}))
        with pytest.raises(ValidationError):
            find_period_and_factors(hist, 6, 15)


class TestTruthTableDecode:
    def test_xor_oracle_rows(self):
        spec = ProblemSpec(kind="truth_table", n=2, m=1, table=(0, 1, 1, 0))
        oracle = build(spec).circuit
        b = CircuitBuilder(3, 3)
        b.h(0).h(1)
        for g in oracle.gates:
            if g.kind.value == "measure":
                continue
            b.gate(g.kind, g.qubits, (), g.params)
        for q in range(3):
            b.measure(q, q)
        counts = run(b.build(), RunConfig(shots=512, seed=6))
        view = to_truth_table(counts, input_bits=(0, 1), output_bits=(2,))
        got = {row.input_pattern: row.outputs for row in view.rows}
        assert set(got) == {"00", "01", "10", "11"}
        for pattern, outputs in got.items():
            expected = "1" if pattern.count("1") == 1 else "0"
            assert len(outputs) == 1 and outputs[0][0] == expected

    def test_single_state(self):
        view = to_truth_table(Counts(shots=4, width=2, entries={"10": 4}),
                              input_bits=(0,), output_bits=(1,))
        assert len(view.rows) == 1
        assert view.rows[0].outputs == (("1", 4),)

    def test_overlap_rejected(self):
        with pytest.raises(ValidationError):
            to_truth_table(Counts(shots=1, width=2, entries={"00": 1}),
                           input_bits=(0,), output_bits=(0,))


class TestImageDecode:
    def test_exact_round_trip(self):
        spec = ProblemSpec(kind="image", width=2, height=2, pixels=(0, 1, 2, 1))
        result = build(spec)
        image = to_image(probabilities(result.circuit), 2, 2, result.normalization)
        assert image.pixels == pytest.approx((0, 1, 2, 1), abs=1e-9)
        assert image.overflow_mass == pytest.approx(0.0, abs=1e-12)

    def test_uniform_flat(self):
        probs = {"00": 0.25, "01": 0.25, "10": 0.25, "11": 0.25}
        image = to_image(probs, 2, 2, 4.0)
        assert image.pixels == pytest.approx((1, 1, 1, 1))

    def test_sampled_within_three_sigma(self):
        spec = ProblemSpec(kind="image", width=2, height=2, pixels=(0, 1, 2, 1))
        result = build(spec)
        counts = run(result.circuit, RunConfig(shots=4096, seed=12))
        image = to_image(counts, 2, 2, result.normalization)
        for got, want in zip(image.pixels, (0, 1, 2, 1)):
            p = want / 4.0
            sigma = 4.0 * math.sqrt(p * (1 - p) / 4096)
            assert abs(got - want) <= max(3 * sigma, 1e-9)

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            to_image(Counts(shots=1, width=1, entries={"0": 1}), 2, 2, 1.0)

    def test_overflow_flagged(self):
        counts = Counts(shots=4, width=2, entries={"00": 2, "11": 2})
        image = to_image(counts, 1, 3, 1.0)        # states beyond index 2 carry mass
        assert image.overflow_mass == pytest.approx(0.5)


class TestContingency:
    def test_bell_diagonal(self):
        counts = Counts(shots=1000, width=2, entries={"00": 500, "11": 500})
        table = to_contingency(counts, row_bits=(0,), col_bits=(1,))
        assert table.cells == ((500, 0), (0, 500))
        assert table.row_marginals == (500, 500)
        assert table.col_marginals == (500, 500)

    def test_empty_cols_marginal_only(self):
        counts = Counts(shots=10, width=2, entries={"00": 4, "01": 6})
        table = to_contingency(counts, row_bits=(0,), col_bits=())
        assert table.col_patterns == ("",)
        assert table.cells == ((4,), (6,))

    def test_cells_always_sum_to_shots(self):
        rng = np.random.default_rng(8)
        entries = {}
        for v in rng.choice(16, size=9, replace=False):
            entries[format(int(v), "04b")] = int(rng.integers(1, 50))
        counts = Counts(shots=sum(entries.values()), width=4, entries=entries)
        table = to_contingency(counts, row_bits=(0, 2), col_bits=(1,))
        assert sum(map(sum, table.cells)) == counts.shots


class TestHea:
    def _flip_setup(self, readout_error, shots=1000, entries=None, width=1):
        """1-qubit circuit whose only flip source is the readout error."""
        snap = make_snapshot(num_qubits=max(width, 2), one_q_error=0.0,
                             cx_error=0.0, readout_error=readout_error)
        b = CircuitBuilder(width, width)
        for q in range(width):
            b.x(q)
            b.measure(q, q)
        circuit = b.build()
        counts = Counts(shots=shots, width=width,
                        entries=entries or {"1" * width: shots})
        return counts, circuit, snap

    def test_zero_flip_identity(self):
        counts, circuit, snap = self._flip_setup(0.0)
        report = hypothetical_error_adjustment(counts, circuit, snap,
                                               trials=100, seed=1)
        state = report.states["1"]
        assert state.mean == counts.entries["1"]
        assert state.sd == 0.0
        assert (state.ci_low, state.ci_high) == (1000, 1000)

    def test_flip_prob_composition(self):
        snap = make_snapshot(one_q_error=0.01, readout_error=0.05)
        b = CircuitBuilder(2, 2)
        b.sx(0).measure(0, 0).measure(1, 1)
        probs = flip_probabilities(b.build(), snap)
        assert probs[0] == pytest.approx(1 - 0.99 * 0.95)
        assert probs[1] == pytest.approx(0.05)

    def test_single_bit_expectation(self):
        counts, circuit, snap = self._flip_setup(0.1, entries={"0": 1000},
                                                 shots=1000)
        report = hypothetical_error_adjustment(counts, circuit, snap,
                                               trials=1000, seed=7)
        state = report.states["0"]
        stderr = state.sd / math.sqrt(report.trials)
        assert abs(state.mean - 900.0) <= 3 * max(stderr, 1e-9)

    def test_mass_conserved_every_trial(self):
        counts, circuit, snap = self._flip_setup(0.2, shots=500,
                                                 entries={"1": 300, "0": 200})
        report = hypothetical_error_adjustment(counts, circuit, snap,
                                               trials=150, seed=3)
        trials = np.array([report.samples[k] for k in report.samples])
        assert (trials.sum(axis=0) == 500).all()

    def test_uniform_counts_fixed_point(self):
        snap = make_snapshot(num_qubits=2, one_q_error=0.0, cx_error=0.0,
                             readout_error=0.15)
        b = CircuitBuilder(2, 2)
        b.x(0).x(1).measure(0, 0).measure(1, 1)
        counts = Counts(shots=800, width=2,
                        entries={"00": 200, "01": 200, "10": 200, "11": 200})
        report = hypothetical_error_adjustment(counts, b.build(), snap,
                                               trials=1000, seed=5)
        for state in report.states.values():
            stderr = state.sd / math.sqrt(report.trials)
            assert abs(state.mean - 200.0) <= 3 * max(stderr, 1e-9)
            assert not state.differentiated

    def test_oracle_channel_expectation(self):
        # exact expectation is the tensor flip channel applied to the counts
        snap = make_snapshot(num_qubits=3, edges=((0, 1), (1, 2)),
                             one_q_error=0.02, cx_error=0.0, readout_error=0.04)
        b = CircuitBuilder(3, 3)
        b.sx(0).sx(1).sx(2)
        for q in range(3):
            b.measure(q, q)
        circuit = b.build()
        counts = Counts(shots=600, width=3,
                        entries={"000": 300, "011": 200, "110": 100})
        probs = flip_probabilities(circuit, snap)
        flip = [np.array([[1 - p, p], [p, 1 - p]]) for p in probs]
        channel = np.kron(np.kron(flip[2], flip[1]), flip[0])
        vec = np.zeros(8)
        for key, value in counts.entries.items():
            vec[int(key, 2)] = value
        expected = channel @ vec
        report = hypothetical_error_adjustment(counts, circuit, snap,
                                               trials=1000, seed=11)
        for idx in range(8):
            key = format(idx, "03b")
            state = report.states.get(key)
            mean = state.mean if state else 0.0
            sd = state.sd if state else 0.0
            stderr = sd / math.sqrt(1000)
            assert abs(mean - expected[idx]) <= 3 * max(stderr, 0.5)

    def test_ci_brackets_mean(self):
        counts, circuit, snap = self._flip_setup(0.1, shots=400,
                                                 entries={"0": 250, "1": 150})
        report = hypothetical_error_adjustment(counts, circuit, snap,
                                               trials=300, seed=19)
        for state in report.states.values():
            assert state.ci_low <= state.mean <= state.ci_high

    def test_width_mismatch(self):
        counts, circuit, snap = self._flip_setup(0.1)
        bad = Counts(shots=10, width=2, entries={"00": 10})
        with pytest.raises(ValidationError):
            hypothetical_error_adjustment(bad, circuit, snap, trials=100, seed=0)

    def test_minimum_trials(self):
        counts, circuit, snap = self._flip_setup(0.1)
        with pytest.raises(ValidationError):
            hypothetical_error_adjustment(counts, circuit, snap, trials=10, seed=0)

    def test_seed_determinism(self):
        counts, circuit, snap = self._flip_setup(0.3, shots=200,
                                                 entries={"0": 120, "1": 80})
        a = hypothetical_error_adjustment(counts, circuit, snap, trials=120, seed=21)
        b = hypothetical_error_adjustment(counts, circuit, snap, trials=120, seed=21)
        assert a.samples == b.samples
