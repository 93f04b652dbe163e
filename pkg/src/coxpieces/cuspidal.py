"""Twisted conjugacy classes, characteristic polynomials and cuspidal classes."""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .coxcore import CoxeterSystem, DiagramAutomorphism, QuadScalar, build_system, s_interval
from .errors import IrrationalLeak, InvalidPartition, SigmaOrderNotTwo, UnsupportedType
from .minlen import TwistedAction, reduce_to_min
from .pieces import orbit_piece_I
from .verdict import Verdict

# ---------------------------------------------------------------------------
# integer polynomials in q, coefficients in ascending degree


@dataclass(frozen=True)
class CharPoly:
    """Coefficients in ascending degree.  Integers, except for twists that
    exchange non-conjugate generators, where QuadScalar entries can occur."""
    coeffs: tuple

    @property
    def is_rational(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, q: int | Fraction) -> int | Fraction:
        return sum(c * q ** k for k, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if not isinstance(c, int):
                mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
                terms.append(("+", f"({c}){'*' + mono if mono else ''}"))
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' + mono if mono else ''}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def poly_prod(factors) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for f in factors:
        out = poly_mul(out, tuple(f))
    return out


def poly_divexact(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...] | None:
    """a / b if b divides a over Z (b monic up to sign), else None."""
    a = list(a)
    lead = b[-1]
    if len(a) < len(b):
        return None if any(a) else (0,)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1]
        if c % lead:
            return None
        c //= lead
        out[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    return tuple(out) if not any(a) else None


def q_power_plus_one(k: int) -> tuple[int, ...]:
    return (1,) + (0,) * (k - 1) + (1,)


# ---------------------------------------------------------------------------
# determinants


def berkowitz(A: list[list[QuadScalar]]) -> list[QuadScalar]:
    """Coefficients of det(q I - A), highest degree first, without division."""
    n = len(A)
    zero, one = QuadScalar(0), QuadScalar(1)
    C = [one]
    for r in range(n):
        a = A[r][r]
        R = A[r][:r]
        vec = [A[i][r] for i in range(r)]
        t = [one, -a]
        for _ in range(r):
            dot = zero
            for x, y in zip(R, vec):
                dot = dot + x * y
            t.append(-dot)
            vec = [sum((A[i][j] * vec[j] for j in range(r)), zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = zero
            for j in range(min(i, len(C) - 1) + 1):
                if i - j < len(t):
                    s = s + t[i - j] * C[j]
            new.append(s)
        C = new
    return C


def twist_is_crystallographic(W: CoxeterSystem, sigma: DiagramAutomorphism) -> bool:
    """True when sigma never moves a generator to a non-conjugate one.

    Then w sigma is conjugate to an integral matrix and p(q) has integer
    coefficients; otherwise (twisted B2, G2, F4) it need not."""
    cls = {i: k for k, c in enumerate(W.generator_classes) for i in c}
    return all(cls[i] == cls[sigma(i)] for i in range(W.rank))


def char_poly(W: CoxeterSystem, w: int, sigma: DiagramAutomorphism | None = None,
              strict: bool | None = None) -> CharPoly:
    """det(q - w sigma) on the span of the simple roots.

    With strict (the default for crystallographic twists) a coefficient outside
    Z raises IrrationalLeak."""
    sigma = sigma or W.twist
    if strict is None:
        strict = twist_is_crystallographic(W, sigma)
    M = W.matrix_of(w, sigma)
    coeffs = berkowitz(M)
    out = []
    for c in reversed(coeffs):
        if c.is_rational() and c.a.denominator == 1:
            out.append(int(c.a))
        elif strict:
            raise IrrationalLeak(f"coefficient {c!r} of p for {W.format(w)} is not an integer")
        else:
            out.append(c)
    return CharPoly(tuple(out))


# ---------------------------------------------------------------------------
# classes


def l_i(W: CoxeterSystem, w: int, i: int) -> int:
    cls = next(c for c in W.generator_classes if i in c)
    return sum(1 for k in W.word(w) if k in cls)


def l_i_sigma(W: CoxeterSystem, w: int, i: int, sigma: DiagramAutomorphism | None = None) -> int:
    sigma = sigma or W.twist
    return sum(l_i(W, w, k) for k in sigma.orbit(i))


def length_profile(W: CoxeterSystem, w: int, sigma: DiagramAutomorphism | None = None) -> tuple[int, ...]:
    sigma = sigma or W.twist
    return tuple(l_i_sigma(W, w, i, sigma) for i in range(W.rank))


@dataclass
class TwistedClass:
    members: list[int]
    mins: list[int]
    cuspidal: bool
    charpoly: CharPoly
    profile: tuple[int, ...]
    min_length: int
    label: str | None = None

    @property
    def rep(self) -> int:
        return self.mins[0]


def _class_partition(W: CoxeterSystem, sigma: DiagramAutomorphism) -> list[list[int]]:
    perm = sigma.perm
    label = [-1] * W.order
    out = []
    for start in W.elements():
        if label[start] >= 0:
            continue
        label[start] = start
        orb = [start]
        queue = deque([start])
        while queue:
            y = queue.popleft()
            for i in range(W.rank):
                z = W.rmul(W.lmul(i, y), perm[i])
                if label[z] < 0:
                    label[z] = start
                    orb.append(z)
                    queue.append(z)
        out.append(sorted(orb))
    return out


def is_cuspidal_members(W: CoxeterSystem, members, sigma: DiagramAutomorphism) -> bool:
    full = frozenset(range(W.rank))
    return all(W.support_sigma(w, sigma) == full for w in members)


def twisted_classes(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None) -> list[TwistedClass]:
    """All sigma-twisted classes, ordered by minimal length then representative."""
    sigma = sigma or W.twist
    out = []
    for orb in _class_partition(W, sigma):
        m = min(W.length(w) for w in orb)
        mins = [w for w in orb if W.length(w) == m]
        out.append(TwistedClass(orb, mins, is_cuspidal_members(W, orb, sigma),
                                char_poly(W, mins[0], sigma), length_profile(W, mins[0], sigma), m))
    out.sort(key=lambda c: (c.min_length, c.rep))
    return out


def is_cuspidal(W: CoxeterSystem, members, sigma: DiagramAutomorphism | None = None) -> bool:
    """Exact test: the class meets no W_J with J proper and sigma-stable.

    Also asserts that p(1) != 0 forces cuspidality."""
    sigma = sigma or W.twist
    mem = set(members)
    cusp = True
    for r in range(W.rank):
        for J in itertools.combinations(range(W.rank), r):
            if sigma.closure(J) != frozenset(J):
                continue
            if any(x in mem for x in W.parabolic_elements(J)):
                cusp = False
                break
        if not cusp:
            break
    if cusp != is_cuspidal_members(W, mem, sigma):
        raise AssertionError("support test and parabolic test disagree")
    if not cusp and char_poly(W, min(mem), sigma)(1) != 0:
        raise AssertionError("p(1) != 0 but the class is not cuspidal")
    return cusp


# ---------------------------------------------------------------------------
# representatives from partitions


def partitions(n: int, max_part: int | None = None):
    """Partitions of n as weakly decreasing tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def _check_partition(alpha, total: int, weight=lambda a: a) -> tuple[int, ...]:
    alpha = tuple(int(a) for a in alpha)
    if not alpha or any(a < 1 for a in alpha) or list(alpha) != sorted(alpha, reverse=True):
        raise InvalidPartition(f"{alpha} is not a partition")
    if sum(weight(a) for a in alpha) != total:
        raise InvalidPartition(f"{alpha} has the wrong size")
    return alpha


def _inv(word) -> tuple[int, ...]:
    return tuple(reversed(word))


def rep_A(n: int) -> tuple[int, ...]:
    return s_interval(n, 1)


def rep_2A(n: int, alpha) -> tuple[int, ...]:
    """w_alpha for a sequence with sum(2 alpha_i - 1) = n + 1."""
    alpha = _check_partition(alpha, n + 1, lambda a: 2 * a - 1)
    word: tuple[int, ...] = ()
    done = 0
    for k, a in enumerate(alpha, start=1):
        word += s_interval(n + k - done - a, done + 1)
        done += a
    return word


def rep_B(n: int, alpha) -> tuple[int, ...]:
    alpha = _check_partition(alpha, n)
    word: tuple[int, ...] = ()
    done = 0
    for a in alpha:
        word += _inv(s_interval(n - 1, done + a)) + s_interval(n, done + 1)
        done += a
    return word


def w_ab(n: int, a: int, b: int) -> tuple[int, ...]:
    if b <= n - 1:
        return _inv(s_interval(n - 2, b)) + s_interval(n, a + 1)
    return s_interval(n - 1, a + 1)


def rep_D(n: int, alpha) -> tuple[int, ...]:
    alpha = _check_partition(alpha, n)
    word: tuple[int, ...] = ()
    done = 0
    for a in alpha:
        word += w_ab(n, done, done + a)
        done += a
    return word


REP_3D4 = ("2,1", "3,2,1,3", "3,2,1,2,3,2", "1,2,4,3,2,1,2,4")
EXPECTED_3D4 = {
    "2,1": (1, 0, -1, 0, 1),
    "3,2,1,3": poly_prod([(1, -1, 1)] * 2),
    "3,2,1,2,3,2": poly_prod([(1, 1), (1, 1), (1, -1, 1)]),
    "1,2,4,3,2,1,2,4": poly_prod([(1, 1, 1)] * 2),
}
WORDS_2E6 = {
    "1,3,1,2,4,3,1,5,4,3,1,6,5,4,3,1": poly_prod([(1, 1)] * 4 + [(1, 1, 1)]),
    "2,4,5,4,2,3,4,5,6,5,4,2,3,4,5,6": poly_prod([(1, 1, 1)] * 2),
}

_TYPE = re.compile(r"^([23]?)([A-G])(\d+)$")


def _parse_simple(type_spec: str) -> tuple[int, str, int]:
    mo = _TYPE.match(type_spec.strip())
    if not mo:
        raise UnsupportedType(f"representatives need a single irreducible type, got {type_spec!r}")
    return int(mo.group(1) or 1), mo.group(2), int(mo.group(3))


def representatives(type_spec: str) -> list[tuple[str, tuple[int, ...], tuple[int, ...]]]:
    """(label, 0-based word, expected characteristic polynomial) per cuspidal class."""
    tw, fam, n = _parse_simple(type_spec)
    out = []
    if fam == "A" and tw == 1:
        out.append((f"({n + 1})", rep_A(n), tuple([1] * (n + 1))))
    elif fam == "A" and tw == 2:
        for lam in partitions(n + 1):
            if all(p % 2 for p in lam):
                alpha = tuple((p + 1) // 2 for p in lam)
                expect = poly_divexact(poly_prod(q_power_plus_one(p) for p in lam), (1, 1))
                out.append((str(lam), rep_2A(n, alpha), expect))
    elif fam in "BC" and tw == 1:
        for alpha in partitions(n):
            out.append((str(alpha), rep_B(n, alpha), poly_prod(q_power_plus_one(a) for a in alpha)))
    elif fam == "B" and tw == 2 and n == 2:
        out.append(("(s1s2s1)", (0, 1, 0), poly_prod([(1, 1), (1, 1)])))
    elif fam == "D" and tw in (1, 2):
        for alpha in partitions(n):
            if len(alpha) % 2 == tw - 1:
                out.append((str(alpha), rep_D(n, alpha), poly_prod(q_power_plus_one(a) for a in alpha)))
    elif fam == "D" and tw == 3 and n == 4:
        for w in REP_3D4:
            out.append((w, tuple(int(x) - 1 for x in w.split(",")), EXPECTED_3D4[w]))
    else:
        raise UnsupportedType(f"no representative formulas for {type_spec}")
    return out


# ---------------------------------------------------------------------------
# verification


def cyc_plateau(W: CoxeterSystem, w: int, sigma: DiagramAutomorphism) -> tuple[set[int], bool]:
    """Cyclic shift class of w and whether it is terminal.

    Every equal-length move s_j y sigma(s_j) is checked to be an elementary
    strong conjugation by s_j, so the plateau is the cyclic shift class.
    """
    perm = sigma.perm
    lw = W.length(w)
    seen = {w}
    queue = deque([w])
    terminal = True
    while queue:
        y = queue.popleft()
        for j in range(W.rank):
            sy = W.lmul(j, y)
            z = W.rmul(sy, perm[j])
            lz = W.length(z)
            if lz < lw:
                terminal = False
            elif lz == lw and z not in seen:
                if not (W.length(sy) == lw + 1 or W.length(W.rmul(y, perm[j])) == lw + 1):
                    raise AssertionError("equal-length move is not a strong conjugation")
                seen.add(z)
                queue.append(z)
    return seen, terminal


@dataclass
class CuspidalReport:
    type_spec: str
    classes: list[TwistedClass]
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def cuspidal(self) -> list[TwistedClass]:
        return [c for c in self.classes if c.cuspidal]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def classify_cuspidal(type_spec: str, match: bool = True, check_terminal: bool = True) -> CuspidalReport:
    W = build_system(type_spec)
    sigma = W.twist
    classes = twisted_classes(W, sigma)
    report = CuspidalReport(type_spec, classes)
    class_of = {}
    for k, cl in enumerate(classes):
        for w in cl.members:
            class_of[w] = k
    cusp = [k for k, c in enumerate(classes) if c.cuspidal]
    full = frozenset(range(W.rank))

    # p(1) != 0 implies cuspidal
    bad = next((W.format(c.rep) for c in classes if c.charpoly(1) != 0 and not c.cuspidal), None)
    report.verdicts.append(Verdict("p1-nonzero-implies-cuspidal", type_spec, bad is None, bad))

    # a terminal element of full support is minimal in a cuspidal class
    if check_terminal:
        bad = None
        done: set[int] = set()
        for w in W.elements():
            if w in done or W.support_sigma(w, sigma) != full:
                continue
            cyc, terminal = cyc_plateau(W, w, sigma)
            done |= cyc
            if not terminal:
                continue
            cl = classes[class_of[w]]
            if not cl.cuspidal or W.length(w) != cl.min_length:
                bad = W.format(w)
                break
        report.verdicts.append(Verdict("terminal-full-support", type_spec, bad is None, bad))

    # O_min of each cuspidal class is one cyclic shift class
    bad = None
    for k in cusp:
        cl = classes[k]
        cyc, terminal = cyc_plateau(W, cl.rep, sigma)
        if cyc != set(cl.mins) or not terminal:
            bad = W.format(cl.rep)
            break
    report.verdicts.append(Verdict("min-is-one-cyclic-class", type_spec, bad is None, bad))

    # char poly and length profile separate cuspidal classes
    bad = None
    keys = {}
    for k in cusp:
        cl = classes[k]
        profiles = {length_profile(W, w, sigma) for w in cl.mins}
        if len(profiles) != 1:
            bad = {"profile varies in": W.format(cl.rep)}
            break
        key = (cl.charpoly, cl.profile)
        if key in keys:
            bad = {"same invariants": [W.format(keys[key]), W.format(cl.rep)]}
            break
        keys[key] = cl.rep
    report.verdicts.append(Verdict("invariants-separate", type_spec, bad is None, bad))

    if match:
        reps = representatives(type_spec)
        hit: dict[int, str] = {}
        bad = None
        for label, word, expect in reps:
            w = W.from_word(word)
            k = class_of[w]
            if not classes[k].cuspidal or k in hit:
                bad = {"label": label, "reason": "not cuspidal" if not classes[k].cuspidal else "repeated class"}
                break
            if char_poly(W, w, sigma).coeffs != tuple(expect):
                bad = {"label": label, "charpoly": str(char_poly(W, w, sigma)),
                       "expected": str(CharPoly(tuple(expect)))}
                break
            hit[k] = label
            classes[k].label = label
        if bad is None and set(hit) != set(cusp):
            bad = {"reason": "representatives miss cuspidal classes",
                   "found": len(hit), "cuspidal": len(cusp)}
        report.verdicts.append(Verdict("representatives-match", type_spec, bad is None, bad,
                                       {"cuspidal": len(cusp), "representatives": len(reps)}))
    return report


def verify_shift_reduction(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None, scope: str = "") -> list[Verdict]:
    """(a) every element reduces to O_min; (b) every element of O_min is one
    elementary strong conjugation away from the cyclic shift class of any other."""
    sigma = sigma or W.twist
    action = TwistedAction(W, sigma)
    bad_a = bad_b = None
    for cl in twisted_classes(W, sigma):
        mins = set(cl.mins)
        if bad_a is None:
            for w in cl.members:
                end, chain = reduce_to_min(action, w)
                if end not in mins or not chain.is_nonincreasing():
                    bad_a = W.format(w)
                    break
        if bad_b is None:
            done: set[int] = set()
            for w in cl.mins:
                if w in done:
                    continue
                cyc, _ = cyc_plateau(W, w, sigma)
                done |= cyc
                reach = set(cyc)
                for y in cyc:
                    reach.update(z for _, z in action.strong_neighbors(y))
                if not mins <= reach:
                    v = min(mins - reach)
                    bad_b = {"w": W.format(w), "v": W.format(v)}
                    break
    return [Verdict("reduces-to-min-by-shifts", scope, bad_a is None, bad_a),
            Verdict("min-one-strong-step-from-cyclic-class", scope, bad_b is None, bad_b)]


def verify_inverse_twist(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None, scope: str = "") -> Verdict:
    """w and sigma(w)^-1 lie in the same sigma-class (needs sigma^2 = 1)."""
    sigma = sigma or W.twist
    if sigma.order > 2:
        raise SigmaOrderNotTwo("this check needs an automorphism of order <= 2")
    class_of = {}
    for k, orb in enumerate(_class_partition(W, sigma)):
        for w in orb:
            class_of[w] = k
    bad = next((W.format(w) for w in W.elements()
                if class_of[w] != class_of[W.inv(W.apply_automorphism(sigma, w))]), None)
    return Verdict("inverse-twist-conjugate", scope, bad is None, bad)


def verify_charpoly_invariance(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None,
                               scope: str = "") -> Verdict:
    sigma = sigma or W.twist
    bad = None
    for orb in _class_partition(W, sigma):
        p = char_poly(W, orb[0], sigma)
        for w in orb[1:]:
            if char_poly(W, w, sigma) != p:
                bad = {"class": W.format(orb[0]), "element": W.format(w)}
                break
        if bad:
            break
    return Verdict("charpoly-class-invariant", scope, bad is None, bad)


def verify_profile_invariance(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None,
                              scope: str = "") -> Verdict:
    """l_{i,sigma} is constant on every cyclic shift class."""
    sigma = sigma or W.twist
    done: set[int] = set()
    bad = None
    for w in W.elements():
        if w in done:
            continue
        cyc, _ = cyc_plateau(W, w, sigma)
        done |= cyc
        if len({length_profile(W, y, sigma) for y in cyc}) != 1:
            bad = W.format(w)
            break
    return Verdict("length-profile-cyc-invariant", scope, bad is None, bad)


def verify_support_equivalence(W: CoxeterSystem, sigma: DiagramAutomorphism | None = None,
                               scope: str = "") -> Verdict:
    """For J in I, w in W^{sigma(J)}, v in W_{I(w, sigma|J)}:
    supp_sigma(w v) = I iff supp_sigma(w) = I."""
    sigma = sigma or W.twist
    full = frozenset(range(W.rank))
    bad = None
    for r in range(W.rank):
        for J in itertools.combinations(range(W.rank), r):
            mapping = {j: sigma(j) for j in J}
            Jp = frozenset(mapping.values())
            for w in W.elements():
                if not W.is_min_right(w, Jp):
                    continue
                I = orbit_piece_I(W, mapping, w)
                sw = W.support_sigma(w, sigma) == full
                for v in W.parabolic_elements(I):
                    if (W.support_sigma(W.mul(w, v), sigma) == full) != sw:
                        bad = {"J": [j + 1 for j in J], "w": W.format(w), "v": W.format(v)}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    return Verdict("support-equivalence", scope, bad is None, bad)


def verify_2e6_words() -> list[Verdict]:
    """The two length-16 words in twisted E6 with equal length and distinct classes."""
    W = build_system("2E6")
    sigma = W.twist
    words = list(WORDS_2E6)
    elems = [W.parse_word(w) for w in words]
    out = []
    for w, x in zip(words, elems):
        p = char_poly(W, x, sigma)
        out.append(Verdict("2e6-charpoly", w, p.coeffs == WORDS_2E6[w] and W.length(x) == 16,
                           details={"got": str(p), "expected": str(CharPoly(WORDS_2E6[w])),
                                    "length": W.length(x)}))
    classes = _class_partition(W, sigma)
    idx = []
    for x in elems:
        k = next(i for i, orb in enumerate(classes) if x in set(orb))
        idx.append(k)
    cusp = [is_cuspidal_members(W, classes[k], sigma) for k in idx]
    minimal = [W.length(x) == min(W.length(y) for y in classes[k]) for x, k in zip(elems, idx)]
    out.append(Verdict("2e6-distinct-cuspidal", "2E6",
                       idx[0] != idx[1] and all(cusp) and all(minimal),
                       details={"cuspidal": cusp, "minimal": minimal}))
    return out


__all__ = [
    "CharPoly", "poly_mul", "poly_prod", "poly_divexact", "berkowitz", "char_poly",
    "l_i", "l_i_sigma", "length_profile", "TwistedClass", "twisted_classes", "is_cuspidal",
    "partitions", "rep_A", "rep_2A", "rep_B", "rep_D", "w_ab", "representatives",
    "cyc_plateau", "CuspidalReport", "classify_cuspidal", "verify_shift_reduction",
    "verify_inverse_twist", "verify_charpoly_invariance", "verify_profile_invariance",
    "verify_support_equivalence", "verify_2e6_words", "REP_3D4", "WORDS_2E6",
]
