"""Automated simple power analysis of a scalar-multiplication trace.

The trace is cut into equal windows, one per atomic pattern.  The mean
window serves as a threshold: at every sample offset, each window is
classified by whether it lies above the threshold there, giving one key
candidate per sample offset.  A candidate's correctness is the fraction of
windows labelled with the right pattern kind; candidates at offsets whose
addressing differs between the two kinds reach 100% while offsets with
identical addressing hover at the majority-class baseline.  Scalar recovery
resolves the label polarity through the double-and-add grammar (no addition
without a preceding doubling) and reads bits off the pattern sequence.
"""

import csv
from dataclasses import dataclass

import numpy as np

from atomspa.atoms import ScalarK


@dataclass(frozen=True)
class KeyCandidate:
    sample_index: int
    labels: tuple          # one boolean per pattern window
    correctness_pct: float = None  # against ground truth, label True = 'A'


@dataclass
class AttackReport:
    pattern_count: int
    samples_per_pattern: int
    correctness_curve: np.ndarray      # as-is percentages, one per sample
    folded_curve: np.ndarray           # max of as-is and flipped
    perfect_count: int
    per_cycle_max: np.ndarray          # folded maximum per clock cycle
    recovered_bits: tuple              # None when not recovered
    recovered_support: int             # candidates agreeing on the recovery
    best_sample: int
    ground_truth: str = None

    @property
    def recovered_scalar(self):
        if self.recovered_bits is None:
            return None
        return ScalarK(self.recovered_bits)

    @property
    def recovered(self):
        return self.recovered_bits is not None

    def summary_lines(self):
        lines = [
            f"patterns            : {self.pattern_count}",
            f"samples per pattern : {self.samples_per_pattern}",
            f"key candidates      : {self.samples_per_pattern}",
            f"perfect candidates  : {self.perfect_count}"
            + ("" if self.ground_truth else " (folded, blind n/a)"),
            f"max correctness     : {self.folded_curve.max():.2f}%",
            f"recovered           : {'yes' if self.recovered else 'no'}"
            + (f" (support {self.recovered_support}, sample {self.best_sample})"
               if self.recovered else ""),
        ]
        if self.recovered:
            lines.append(f"recovered scalar    : 0x{self.recovered_scalar.value:x}")
        return lines


def segment(trace):
    """Cut the trace into a (pattern_count, samples_per_pattern) matrix."""
    spp = trace.samples_per_pattern
    if trace.samples.size % spp:
        raise ValueError(
            f"trace length {trace.samples.size} not divisible by {spp}")
    return trace.samples.reshape(-1, spp)


def mean_pattern(matrix):
    """Column-wise arithmetic mean: the threshold pattern."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] < 1:
        raise ValueError("need a non-empty pattern matrix")
    return m.mean(axis=0, dtype=np.float64)


def classify_matrix(matrix, threshold):
    """Boolean labels: strictly above the threshold; ties are False."""
    m = np.asarray(matrix)
    thr = np.asarray(threshold)
    if thr.shape != (m.shape[1],):
        raise ValueError("threshold length does not match the matrix")
    return m > thr


def classify(matrix, threshold, truth=None):
    """KeyCandidate objects, one per sample offset (list API; the attack
    pipeline itself stays in array form)."""
    labels = classify_matrix(matrix, threshold)
    curve = correctness_curve(labels, truth) if truth is not None else None
    out = []
    for j in range(labels.shape[1]):
        pct = float(curve[j]) if curve is not None else None
        out.append(KeyCandidate(j, tuple(bool(x) for x in labels[:, j]), pct))
    return out


def _truth_array(truth):
    t = np.asarray([k == "A" for k in truth], dtype=bool)
    return t


def correctness(labels, truth, polarity="as-is"):
    """Percentage of correctly labelled patterns for one candidate."""
    lab = np.asarray(labels, dtype=bool)
    t = _truth_array(truth)
    if lab.shape != t.shape:
        raise ValueError("labels and ground truth differ in length")
    matches = (lab == t).sum() if polarity == "as-is" else (lab != t).sum()
    return 100.0 * float(matches) / t.size


def correctness_curve(labels, truth):
    """Vectorized as-is correctness for every candidate (label True = 'A')."""
    t = _truth_array(truth)
    if labels.shape[0] != t.size:
        raise ValueError("labels and ground truth differ in length")
    matches = (labels == t[:, None]).sum(axis=0)
    return 100.0 * matches / t.size


def resolve_polarity(labels):
    """Map a candidate's labels onto D/A minimizing grammar violations.

    A violation is an addition with no doubling right before it.  Ties go to
    the mapping with fewer additions, then to the as-is mapping.  Returns
    (sequence string, violations).
    """
    lab = np.asarray(labels, dtype=bool)
    options = []
    for flip in (False, True):
        a = lab ^ flip  # True = 'A'
        viol = int(a[0]) + int((a[1:] & a[:-1]).sum())
        options.append((viol, int(a.sum()), int(flip), a))
    options.sort(key=lambda o: o[:3])
    viol, _, _, a = options[0]
    return "".join("A" if x else "D" for x in a), viol


def recover_scalar(da_sequence):
    """Read scalar bits from a D/A sequence (implicit leading 1).

    Each loop iteration is a doubling, optionally followed by an addition
    for a 1 bit.  An addition without a preceding doubling is a grammar
    violation and raises.
    """
    bits = [1]
    i = 0
    n = len(da_sequence)
    while i < n:
        if da_sequence[i] != "D":
            raise ValueError(f"addition without preceding doubling at {i}")
        if i + 1 < n and da_sequence[i + 1] == "A":
            bits.append(1)
            i += 2
        else:
            bits.append(0)
            i += 1
    return tuple(bits)


def _blind_recovery(labels):
    """Pick the most supported grammar-consistent candidate sequence.

    Constant-label candidates carry no information and are skipped.  Returns
    (bits, support, sample_index) or (None, 0, -1).
    """
    rows, cols = labels.shape
    a = labels
    b = ~labels
    viol_a = a[0].astype(np.int64) + (a[1:] & a[:-1]).sum(axis=0)
    viol_b = b[0].astype(np.int64) + (b[1:] & b[:-1]).sum(axis=0)
    ones_a = a.sum(axis=0)
    ones_b = rows - ones_a
    nonconst = (ones_a > 0) & (ones_a < rows)
    groups = {}
    for j in np.nonzero(nonconst)[0]:
        for viol, seq_col in ((int(viol_a[j]), a[:, j]),
                              (int(viol_b[j]), b[:, j])):
            if viol == 0:
                key = seq_col.tobytes()
                entry = groups.setdefault(key, [0, int(j), seq_col])
                entry[0] += 1
    if not groups:
        return None, 0, -1
    support, j, col = max(groups.values(), key=lambda e: (e[0], -e[1]))
    seq = "".join("A" if x else "D" for x in col)
    return recover_scalar(seq), support, j


def run_attack(trace, chunks=1):
    """Full pipeline: segment, mean threshold, classify, evaluate, recover.

    chunks > 1 evaluates the candidate columns in that many column blocks
    (results are identical; the work is embarrassingly parallel across
    sample offsets).
    """
    matrix = segment(trace)
    thr = mean_pattern(matrix)
    if chunks > 1:
        parts = [classify_matrix(m, t) for m, t in zip(
            np.array_split(matrix, chunks, axis=1),
            np.array_split(thr, chunks))]
        labels = np.concatenate(parts, axis=1)
    else:
        labels = classify_matrix(matrix, thr)

    truth = trace.meta.get("ground_truth")
    if truth is not None:
        curve = correctness_curve(labels, truth)
        folded = np.maximum(curve, 100.0 - curve)
        perfect = int((folded >= 100.0).sum())
    else:
        curve = np.full(labels.shape[1], np.nan)
        folded = curve
        perfect = 0

    bits, support, best_j = _blind_recovery(labels)

    spc = trace.meta["samples_per_cycle"]
    cycles = trace.meta["cycles_per_pattern"]
    if truth is not None:
        per_cycle = folded.reshape(cycles, spc).max(axis=1)
    else:
        per_cycle = np.full(cycles, np.nan)

    return AttackReport(
        pattern_count=matrix.shape[0],
        samples_per_pattern=matrix.shape[1],
        correctness_curve=curve,
        folded_curve=folded,
        perfect_count=perfect,
        per_cycle_max=per_cycle,
        recovered_bits=bits,
        recovered_support=support,
        best_sample=best_j,
        ground_truth=truth,
    )


def write_report(report, out_dir, stem="attack"):
    """Text summary, per-sample CSV, and the correctness-curve SVG."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    txt = os.path.join(out_dir, f"{stem}_summary.txt")
    with open(txt, "w") as f:
        f.write("\n".join(report.summary_lines()) + "\n")
    csv_path = os.path.join(out_dir, f"{stem}_correctness.csv")
    with open(csv_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["sample", "clock_cycle", "correctness_pct", "folded_pct"])
        spc = report.samples_per_pattern // report.per_cycle_max.size
        for j in range(report.samples_per_pattern):
            w.writerow([j, j // spc + 1,
                        f"{report.correctness_curve[j]:.4f}",
                        f"{report.folded_curve[j]:.4f}"])
    svg_path = os.path.join(out_dir, f"{stem}_correctness.svg")
    with open(svg_path, "w") as f:
        f.write(correctness_svg(report))
    return [txt, csv_path, svg_path]


def correctness_svg(report, width=1000, height=320):
    """Correctness of every key candidate over the sample offset axis."""
    margin = 45
    w = width - 2 * margin
    h = height - 2 * margin
    curve = report.folded_curve
    n = curve.size
    step = max(1, n // (2 * w))
    pts = []
    for j in range(0, n, step):
        x = margin + w * j / max(1, n - 1)
        y = margin + h * (1.0 - curve[j] / 100.0)
        pts.append(f"{x:.1f},{y:.1f}")
    grid = []
    for pct in (0, 25, 50, 75, 100):
        y = margin + h * (1.0 - pct / 100.0)
        grid.append(
            f'<line x1="{margin}" y1="{y:.1f}" x2="{width-margin}" y2="{y:.1f}" '
            f'stroke="#ddd"/>'
            f'<text x="4" y="{y+4:.1f}" font-size="11">{pct}%</text>')
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        + "\n".join(grid) + "\n"
        f'<polyline points="{" ".join(pts)}" fill="none" stroke="#c22" '
        f'stroke-width="1"/>\n'
        f'<text x="{width/2-80}" y="{height-8}" font-size="12">'
        f'key candidate / sample offset within pattern</text>\n'
        "</svg>\n")
