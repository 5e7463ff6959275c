"""Atomic operation patterns and the double-and-add scalar multiplication.

Point state lives in nine named machine registers.  A point P is held as
(X1;X2;X3;Z1;Z2) = (X; Y; Z; Z^2; Z^3) in Jacobian coordinates with the two
Z powers cached, so a following mixed addition can consume qx*Z^2 and qy*Z^3
without recomputing them.  Doubling and addition are fixed 21-operation
sequences with identical operation kinds position by position; only the
register operands differ, which is exactly the property the address-level
side channel exploits.

The addition sequence contains three filler operations (2, 5, 8) whose
results are overwritten before any use; they exist to keep the kind sequence
aligned with the doubling.  The curve constant a = -3 is baked into the
doubling algebra (3(X^2 - Z^4) = 3X^2 + aZ^4).
"""

from dataclasses import dataclass

REGISTER_NAMES = ("X1", "X2", "X3", "Z1", "Z2", "R0", "R1", "R2", "R3")

# external operand ports feeding the affine addend Q = (qx, qy)
EXT_QX = "QX"
EXT_QY = "QY"


@dataclass(frozen=True)
class AtomOp:
    index: int
    kind: str  # mul | add | sub | copy
    dst: str
    src1: str
    src2: str = None


def _op(index, kind, dst, src1, src2=None):
    return AtomOp(index, kind, dst, src1, src2)


# Point doubling, inputs (X1;X2;X3) = (X; Y; Z), outputs the full
# five-register state (X; Y; Z; Z^2; Z^3) of 2P.
DOUBLE_PATTERN = (
    _op(1, "mul", "R0", "X3", "X3"),    # Z^2
    _op(2, "add", "R2", "X2", "X2"),    # 2Y
    _op(3, "sub", "R1", "X1", "R0"),    # X - Z^2
    _op(4, "mul", "Z1", "X2", "R2"),    # 2Y^2
    _op(5, "add", "X2", "Z1", "Z1"),    # 4Y^2
    _op(6, "mul", "R3", "R2", "X3"),    # Znew = 2YZ
    _op(7, "mul", "R2", "X2", "X1"),    # S = 4XY^2
    _op(8, "add", "X1", "X1", "R0"),    # X + Z^2
    _op(9, "mul", "R0", "R1", "X1"),    # X^2 - Z^4
    _op(10, "mul", "R1", "Z1", "X2"),   # 8Y^4
    _op(11, "add", "X1", "R0", "R0"),   # 2(X^2 - Z^4)
    _op(12, "add", "R0", "R0", "X1"),   # M = 3(X^2 - Z^4)
    _op(13, "mul", "X1", "R0", "R0"),   # M^2
    _op(14, "sub", "X1", "X1", "R2"),   # M^2 - S
    # squares the new Z kept in R3; squaring anything else breaks the
    # cached-Z chain consumed by the next addition (oracle-pinned)
    _op(15, "mul", "Z1", "R3", "R3"),   # Znew^2
    _op(16, "sub", "X1", "X1", "R2"),   # Xnew = M^2 - 2S
    _op(17, "sub", "R2", "R2", "X1"),   # S - Xnew
    # Znew^3 = Znew^2 * Znew; the next addition reads it as qy's cofactor
    _op(18, "mul", "Z2", "Z1", "R3"),   # Znew^3
    _op(19, "mul", "X2", "R0", "R2"),   # M(S - Xnew)
    _op(20, "copy", "X3", "R3"),        # Znew
    _op(21, "sub", "X2", "X2", "R1"),   # Ynew = M(S - Xnew) - 8Y^4
)

# Mixed addition P + Q, P in registers, Q = (qx; qy; 1) from the external
# ports.  Operations 2 and 3 and operations 20 and 21 are swapped relative
# to the pattern this sequence descends from, which parallelizes better and
# keeps the kind sequence equal to the doubling's.
ADD_PATTERN = (
    _op(1, "mul", "R1", EXT_QX, "Z1"),  # U2 = qx Z^2
    _op(2, "add", "R2", "X2", "X2"),    # filler: same registers as doubling op 2
    _op(3, "sub", "R1", "R1", "X1"),    # H = U2 - X
    _op(4, "mul", "R2", "R1", "R1"),    # H^2
    _op(5, "add", "R0", "R2", "R2"),    # filler: overwritten at op 7
    _op(6, "mul", "R3", "X1", "R2"),    # X H^2
    _op(7, "mul", "R0", EXT_QY, "Z2"),  # S2 = qy Z^3
    _op(8, "add", "Z2", "Z2", "R0"),    # filler: overwritten at op 9
    _op(9, "mul", "Z2", "R1", "R2"),    # H^3
    _op(10, "mul", "R2", "X3", "R1"),   # Znew = Z H
    _op(11, "add", "X1", "R3", "R3"),   # 2 X H^2
    _op(12, "add", "X1", "Z2", "X1"),   # H^3 + 2 X H^2
    # squares the new Z kept in R2 (the Z^2 cache for the next pattern)
    _op(13, "mul", "Z1", "R2", "R2"),   # Znew^2
    _op(14, "sub", "R0", "R0", "X2"),   # r = S2 - Y
    _op(15, "mul", "R1", "R0", "R0"),   # r^2
    _op(16, "sub", "X1", "R1", "X1"),   # Xnew = r^2 - H^3 - 2 X H^2
    _op(17, "sub", "R1", "R3", "X1"),   # X H^2 - Xnew
    _op(18, "mul", "R3", "R1", "R0"),   # r (X H^2 - Xnew)
    _op(19, "mul", "R0", "X2", "Z2"),   # Y H^3
    _op(20, "copy", "X3", "R2"),        # Znew
    _op(21, "sub", "X2", "R3", "R0"),   # Ynew = r(X H^2 - Xnew) - Y H^3
)

PATTERNS = {"D": DOUBLE_PATTERN, "A": ADD_PATTERN}


@dataclass(frozen=True)
class AffinePoint:
    x: int = 0
    y: int = 0
    infinity: bool = False

    def validate(self, curve):
        if self.infinity:
            return self
        curve.field.check(self.x)
        curve.field.check(self.y)
        if not curve.contains(self.x, self.y):
            raise ValueError(f"({self.x:#x}, {self.y:#x}) not on {curve.name}")
        return self


INFINITY = AffinePoint(infinity=True)


@dataclass(frozen=True)
class ScalarK:
    """Scalar as an MSB-first bit sequence with a leading 1."""

    bits: tuple

    def __post_init__(self):
        if not self.bits or self.bits[0] != 1:
            raise ValueError("scalar bits must start with 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("scalar bits must be 0/1")

    @property
    def bit_length(self):
        return len(self.bits)

    @property
    def value(self):
        v = 0
        for b in self.bits:
            v = (v << 1) | b
        return v

    @classmethod
    def from_int(cls, k):
        if k < 1:
            raise ValueError("scalar must be >= 1")
        return cls(tuple(int(c) for c in bin(k)[2:]))

    @classmethod
    def from_string(cls, s):
        """Parse '0x..' / hex / '0b..' binary scalar text."""
        s = s.strip().lower()
        if s.startswith("0b"):
            return cls.from_int(int(s, 2))
        if s.startswith("0x"):
            return cls.from_int(int(s, 16))
        if set(s) <= {"0", "1"} and len(s) > 16:
            return cls.from_int(int(s, 2))
        return cls.from_int(int(s, 16))


def fresh_registers(curve, point):
    """Register file encoding an affine point with Z = 1."""
    point.validate(curve)
    if point.infinity:
        raise ValueError("cannot load the point at infinity")
    regs = {name: 0 for name in REGISTER_NAMES}
    regs["X1"] = point.x
    regs["X2"] = point.y
    regs["X3"] = 1
    regs["Z1"] = 1
    regs["Z2"] = 1
    return regs


def run_pattern(kind, regs, curve, q=None):
    """Execute one atomic pattern in table order.

    Returns (new_regs, write_log); write_log is the ordered list of
    destination registers, one entry per operation.
    """
    f = curve.field
    ops = PATTERNS[kind]
    ext = {}
    if kind == "A":
        if q is None:
            raise ValueError("addition pattern needs the affine addend")
        ext = {EXT_QX: q.x, EXT_QY: q.y}
    regs = dict(regs)
    log = []

    def read(src):
        return ext[src] if src in ext else regs[src]

    for op in ops:
        a = read(op.src1)
        if op.kind == "mul":
            regs[op.dst] = f.mul(a, read(op.src2))
        elif op.kind == "add":
            regs[op.dst] = f.add(a, read(op.src2))
        elif op.kind == "sub":
            regs[op.dst] = f.sub(a, read(op.src2))
        else:  # copy
            regs[op.dst] = a
        log.append(op.dst)
    return regs, log


def _check_doubling_input(regs, curve):
    f = curve.field
    x, y, z = regs["X1"], regs["X2"], regs["X3"]
    if z == 0:
        raise ValueError("doubling input is the point at infinity")
    if y == 0:
        raise ValueError("doubling a two-torsion point lands on infinity")
    z2 = f.sqr(z)
    z4 = f.sqr(z2)
    z6 = f.mul(z4, z2)
    lhs = f.sqr(y)
    rhs = f.add(f.mul(f.sqr(x), x), f.add(f.mul(curve.a, f.mul(x, z4)), f.mul(curve.b, z6)))
    if lhs != rhs:
        raise ValueError("register state is not a curve point")


def _check_addition_input(regs, curve, q):
    f = curve.field
    q.validate(curve)
    if q.infinity:
        raise ValueError("affine addend must not be infinity")
    _check_doubling_input(dict(regs, X2=regs["X2"] or 1), curve)  # allow y = 0 here
    if regs["Z1"] != f.sqr(regs["X3"]) or regs["Z2"] != f.mul(regs["Z1"], regs["X3"]):
        raise ValueError("stale Z-power cache; addition must follow a doubling")
    # P = +-Q exactly when the affine x coordinates agree: qx Z^2 = X
    if f.mul(q.x, regs["Z1"]) == regs["X1"]:
        raise ValueError("P = +-Q is outside the pattern formulas")


def pattern_double(regs, curve, validate=True):
    if validate:
        _check_doubling_input(regs, curve)
    return run_pattern("D", regs, curve)


def pattern_add(regs, curve, q, validate=True):
    if validate:
        _check_addition_input(regs, curve, q)
    return run_pattern("A", regs, curve, q)


def to_affine(regs, curve):
    """Convert the register state back to an affine point (Fermat inversion)."""
    f = curve.field
    z = regs["X3"]
    if z == 0:
        return INFINITY
    zi = f.inv(z)
    zi2 = f.sqr(zi)
    return AffinePoint(f.mul(regs["X1"], zi2), f.mul(regs["X2"], f.mul(zi2, zi)))


def k_mul(k, point, curve):
    """Left-to-right double-and-add over the atomic patterns.

    Returns the affine result and the executed pattern sequence ('D'/'A'
    strings), which is the ground truth the side-channel pipeline evaluates
    against.  Degenerate intermediate states (infinity, P = +-Q) abort with
    a diagnostic; pick a different scalar or base point.
    """
    if isinstance(k, int):
        k = ScalarK.from_int(k)
    point.validate(curve)
    if point.infinity:
        raise ValueError("base point must not be infinity")
    if not (1 <= k.value < curve.n):
        raise ValueError("scalar must be in [1, n)")

    f = curve.field
    regs = fresh_registers(curve, point)
    seq = []
    for i, bit in enumerate(k.bits[1:], start=1):
        if regs["X3"] == 0 or regs["X2"] == 0:
            raise ValueError(f"degenerate state before doubling at bit {i}")
        regs, _ = run_pattern("D", regs, curve)
        seq.append("D")
        if bit:
            if f.mul(point.x, regs["Z1"]) == regs["X1"]:
                raise ValueError(f"degenerate P = +-Q before addition at bit {i}")
            regs, _ = run_pattern("A", regs, curve, point)
            seq.append("A")
    return to_affine(regs, curve), tuple(seq)


# --- independent affine reference (used only for verification) ---


def affine_add(curve, p1, p2):
    if p1.infinity:
        return p2
    if p2.infinity:
        return p1
    f = curve.field
    if p1.x == p2.x:
        if f.add(p1.y, p2.y) == 0:
            return INFINITY
        lam = f.mul(f.add(f.mul(3, f.sqr(p1.x)), curve.a), f.inv(f.mul(2, p1.y)))
    else:
        lam = f.mul(f.sub(p2.y, p1.y), f.inv(f.sub(p2.x, p1.x)))
    x3 = f.sub(f.sqr(lam), f.add(p1.x, p2.x))
    y3 = f.sub(f.mul(lam, f.sub(p1.x, x3)), p1.y)
    return AffinePoint(x3, y3)


def affine_double(curve, p):
    return affine_add(curve, p, p)


def reference_k_mul(k, point, curve):
    """Textbook affine left-to-right double-and-add; test oracle only."""
    if isinstance(k, int):
        k = ScalarK.from_int(k)
    point.validate(curve)
    acc = point
    for bit in k.bits[1:]:
        acc = affine_double(curve, acc)
        if bit:
            acc = affine_add(curve, acc, point)
    return acc


def scalar_for_pattern_counts(bit_length, ones_below_msb, curve, seed=1):
    """Deterministically pick a scalar whose executed trace has
    (bit_length - 1) doublings and ones_below_msb additions."""
    import random

    if ones_below_msb > bit_length - 1:
        raise ValueError("more ones than available bit positions")
    rng = random.Random(seed)
    for _ in range(10000):
        positions = rng.sample(range(bit_length - 1), ones_below_msb)
        bits = [1] + [0] * (bit_length - 1)
        for pos in positions:
            bits[1 + pos] = 1
        k = ScalarK(tuple(bits))
        if 1 <= k.value < curve.n:
            return k
    raise ValueError("could not satisfy scalar constraints")
