"""Synthetic power traces for full scalar-multiplication runs.

Every clock cycle contributes samples_per_cycle samples built from three
terms: a base waveform selected by the block activity states (identical for
both pattern kinds by construction), an address-transition term proportional
to the Hamming distance between the bus address lines of this cycle and the
previous one, and Gaussian noise.  The address lines hold their value across
idle cycles, and the state carries over pattern boundaries, so the final
write-back of one pattern leaks into the first cycle of the next window.

Noise is drawn from a counter-based generator keyed by (seed, pattern
index), which makes the trace a pure function of its inputs no matter how
many workers simulate patterns concurrently.
"""

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

TRACE_DTYPE = "<f4"

# flat per-sample levels for each activity state; the red/light-red/white
# distinction of the multiplier shows up as high/medium/low plateaus
DEFAULT_BASE_LEVELS = {
    "mult:load1": 0.55, "mult:load2": 0.60,
    **{f"mult:pp{i}": 1.00 for i in range(1, 10)},
    "mult:out": 0.80, "mult:wait_first": 0.45, "mult:wait": 0.25,
    "mult:idle": 0.10,
    "addsub:load1": 0.30, "addsub:load2": 0.32, "addsub:store": 0.38,
    "addsub:idle": 0.05,
}


@dataclass(frozen=True)
class LeakageParams:
    alpha: float = 1.0          # power units per flipped address-line bit
    beta: float = 0.0           # optional weight for bus-data Hamming weight
    sigma: float = 0.0          # Gaussian noise standard deviation
    samples_per_cycle: int = 300
    seed: int = 0
    base_levels: dict = None    # overrides for DEFAULT_BASE_LEVELS entries

    def __post_init__(self):
        if self.samples_per_cycle < 1:
            raise ValueError("samples_per_cycle must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    def levels(self):
        lv = dict(DEFAULT_BASE_LEVELS)
        if self.base_levels:
            lv.update(self.base_levels)
        return lv

    def digest(self):
        blob = json.dumps({
            "alpha": self.alpha, "beta": self.beta, "sigma": self.sigma,
            "samples_per_cycle": self.samples_per_cycle, "seed": self.seed,
            "base_levels": sorted((self.levels()).items()),
        }, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass
class Trace:
    samples: np.ndarray
    meta: dict

    @property
    def samples_per_pattern(self):
        return self.meta["samples_per_cycle"] * self.meta["cycles_per_pattern"]


def _hamming(a, b):
    return bin(a ^ b).count("1")


def _transition_leak(states, prev_state):
    """Per-cycle Hamming distance of the (src, dst) address lines."""
    out = np.empty(len(states), dtype=np.float64)
    ps, pd = prev_state
    for i, (s, d) in enumerate(states):
        out[i] = _hamming(ps, s) + _hamming(pd, d)
        ps, pd = s, d
    return out


def _base_vector(schedule, params):
    lv = params.levels()
    spc = params.samples_per_cycle
    out = np.empty(schedule.cycle_count * spc, dtype=np.float64)
    for i, ev in enumerate(schedule.events):
        level = lv[f"mult:{ev.mult_state}"] + lv[f"addsub:{ev.addsub_state}"]
        out[i * spc : (i + 1) * spc] = level
    return out


def simulate_pattern_power(schedule, prev_state, params, rng=None,
                           data_hw=None):
    """Power samples of one pattern window.

    prev_state is the (src, dst) address-line state left by the previous
    window; the first cycle's transition leak is measured against it.
    data_hw optionally supplies a per-cycle Hamming weight of the bus data
    for the beta term (the plain simulator has no data values and leaves it
    unset, making beta inert).
    """
    spc = params.samples_per_cycle
    leak = params.alpha * _transition_leak(schedule.line_states(), prev_state)
    if data_hw is not None:
        leak = leak + params.beta * np.asarray(data_hw, dtype=np.float64)
    samples = _base_vector(schedule, params) + np.repeat(leak, spc)
    if params.sigma > 0:
        if rng is None:
            rng = np.random.default_rng(params.seed)
        samples = samples + rng.normal(0.0, params.sigma, samples.size)
    return samples.astype(TRACE_DTYPE)


def _pattern_rng(seed, index):
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


def simulate_trace(seq, d_sched, a_sched, params, workers=1):
    """Concatenate per-pattern simulations with address carry-over.

    seq is the executed pattern sequence ('D'/'A' strings) and must follow
    the double-and-add grammar: it starts with a doubling and additions only
    ever follow a doubling.
    """
    seq = tuple(seq)
    if not seq:
        raise ValueError("empty pattern sequence")
    prev = None
    for k in seq:
        if k not in ("D", "A"):
            raise ValueError(f"bad pattern kind {k!r}")
        if k == "A" and prev != "D":
            raise ValueError("addition without a preceding doubling")
        prev = k
    if d_sched.cycle_count != a_sched.cycle_count:
        raise ValueError("schedules disagree on the pattern length")

    spp = d_sched.cycle_count * params.samples_per_cycle
    sched = {"D": d_sched, "A": a_sched}
    lines = {k: sched[k].line_states() for k in sched}
    base = {k: _base_vector(sched[k], params) for k in sched}
    # deterministic per-(previous kind, kind) leak vectors; only the first
    # cycle depends on the previous window
    leak = {}
    for pk in ("D", "A"):
        for k in ("D", "A"):
            leak[(pk, k)] = params.alpha * _transition_leak(
                lines[k], lines[pk][-1])

    total = np.empty(spp * len(seq), dtype=TRACE_DTYPE)

    def render(i):
        k = seq[i]
        pk = seq[i - 1] if i > 0 else seq[0]
        vec = base[k] + np.repeat(leak[(pk, k)], params.samples_per_cycle)
        if params.sigma > 0:
            vec = vec + _pattern_rng(params.seed, i).normal(
                0.0, params.sigma, spp)
        total[i * spp : (i + 1) * spp] = vec

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(render, range(len(seq))))
    else:
        for i in range(len(seq)):
            render(i)

    meta = {
        "samples_per_cycle": params.samples_per_cycle,
        "cycles_per_pattern": d_sched.cycle_count,
        "pattern_count": len(seq),
        "ground_truth": "".join(seq),
        "seed": params.seed,
        "alpha": params.alpha,
        "beta": params.beta,
        "sigma": params.sigma,
        "params_hash": params.digest(),
        "dtype": TRACE_DTYPE,
    }
    return Trace(total, meta)


def write_trace(trace, trace_path, meta_path):
    """Raw little-endian float32 samples plus a JSON sidecar."""
    with open(trace_path, "wb") as f:
        f.write(np.ascontiguousarray(trace.samples, dtype=TRACE_DTYPE).tobytes())
    with open(meta_path, "w") as f:
        json.dump(trace.meta, f, indent=1, sort_keys=True)
        f.write("\n")


def read_trace(trace_path, meta_path):
    try:
        with open(meta_path) as f:
            meta = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise IOError(f"cannot read trace metadata: {e}") from e
    samples = np.fromfile(trace_path, dtype=meta.get("dtype", TRACE_DTYPE))
    expect = (meta["samples_per_cycle"] * meta["cycles_per_pattern"]
              * meta["pattern_count"])
    if samples.size != expect:
        raise IOError(
            f"trace length {samples.size} does not match metadata ({expect})")
    return Trace(samples, meta)
