"""Property predicates on rank-metric codes, plus the parameter-feasibility verdict engine."""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Sequence

from .codes import RankCode, Vector, rank_of, support
from .errors import DegenerateCode, EnumerationCapExceeded, InvalidParameters
from .fields import ExtField, is_prime
from .geometry import QSystem, is_2_spannable, is_scattered, q_system_of
from .linalg import DEFAULT_ENUM_CAP, FqSubspace

# Default ceiling on projective codewords entering pairwise scans.
PAIR_SCAN_CAP = 200_000

Certificate = dict

# Literal triple scans are only attempted on codes with at most this many words.
TRIPLE_SCAN_WORD_LIMIT = 512


def _projective_supports(code: RankCode, cap: int) -> list[tuple[Vector, FqSubspace]]:
    out = []
    for u in code.projective_messages(cap=cap):
        out.append((u, support(code.field, code.codeword(u))))
    return out


def is_rank_intersecting(code: RankCode, cap: int = PAIR_SCAN_CAP) -> tuple[bool, Certificate]:
    """Every two nonzero codewords have supports meeting nontrivially.

    Fast path: 2d > n is sufficient. Otherwise supports are deduplicated and
    all unordered pairs checked; pairs whose dimensions sum beyond n intersect
    by Grassmann and are skipped.
    """
    if not code.is_nondegenerate():
        raise DegenerateCode("intersecting is only decided for nondegenerate codes")
    d = code.min_distance(cap=cap)
    n = code.n
    if 2 * d > n:
        return True, {"method": "sufficient-condition", "distance": d, "shortcut": "2d > n"}
    reps = _projective_supports(code, cap)
    distinct: dict[tuple, Vector] = {}
    for u, s in reps:
        distinct.setdefault(s.basis, u)
    supports = [(FqSubspace(code.field.q, n, b), u) for b, u in distinct.items()]
    pairs_checked = 0
    for i in range(len(supports)):
        si, ui = supports[i]
        for j in range(i + 1, len(supports)):
            sj, uj = supports[j]
            if si.dim + sj.dim > n:
                continue  # Grassmann forces a nontrivial intersection
            pairs_checked += 1
            if si.intersect(sj).dim == 0:
                return False, {
                    "method": "support-pair-scan",
                    "violating_messages": [list(ui), list(uj)],
                }
    return True, {
        "method": "support-pair-scan",
        "distinct_supports": len(supports),
        "pairs_checked": pairs_checked,
        "exhaustive": True,
    }


def is_hamming_intersecting(code: RankCode, cap: int = PAIR_SCAN_CAP) -> tuple[bool, Certificate]:
    """No two nonzero codewords have disjoint Hamming supports (index sets)."""
    masks: dict[int, Vector] = {}
    n = code.n
    for u in code.projective_messages(cap=cap):
        c = code.codeword(u)
        mask = 0
        for idx, v in enumerate(c):
            if v:
                mask |= 1 << idx
        masks.setdefault(mask, u)
    items = sorted(masks.items(), key=lambda kv: (bin(kv[0]).count("1"), kv[0]))
    for i in range(len(items)):
        mi, ui = items[i]
        wi = bin(mi).count("1")
        for j in range(i + 1, len(items)):
            mj, uj = items[j]
            if wi + bin(mj).count("1") > n:
                break  # sorted by weight: no later pair can be disjoint
            if mi & mj == 0:
                return False, {
                    "method": "hamming-support-scan",
                    "violating_messages": [list(ui), list(uj)],
                }
    return True, {"method": "hamming-support-scan", "exhaustive": True}


def is_minimal(code: RankCode, cap: int = PAIR_SCAN_CAP) -> tuple[bool, Certificate]:
    """Support containment sigma(c) <= sigma(c') forces c' to be a scalar multiple of c.

    Containments are found through orthogonal complements: sigma(c) <= sigma(c')
    iff dual(c') <= dual(c), and dual spaces are small enough to index by
    membership.
    """
    if not code.is_nondegenerate():
        raise DegenerateCode("minimality is only decided for nondegenerate codes")
    reps = _projective_supports(code, cap)
    by_basis: dict[tuple, Vector] = {}
    for u, s in reps:
        if s.basis in by_basis:
            return False, {
                "method": "support-containment-scan",
                "violating_messages": [list(by_basis[s.basis]), list(u)],
                "note": "distinct projective codewords share a support",
            }
        by_basis[s.basis] = u
    entries = []  # (dual vector frozenset, message, dim)
    index: dict[tuple, list[int]] = {}
    for basis, u in by_basis.items():
        s = FqSubspace(code.field.q, code.n, basis)
        dual_vectors = frozenset(s.dual().enumerate_vectors(cap=cap))
        entries.append((dual_vectors, u, s.dim))
        for v in dual_vectors:
            index.setdefault(v, []).append(len(entries) - 1)
    for j, (dual_j, uj, dim_j) in enumerate(entries):
        if not dual_j:
            # full-space support contains every other support
            if len(entries) > 1:
                other = next(i for i in range(len(entries)) if i != j)
                return False, {
                    "method": "support-containment-scan",
                    "violating_messages": [list(entries[other][1]), list(uj)],
                }
            continue
        anchor = min(dual_j)
        for i in index.get(anchor, ()):
            if i == j:
                continue
            dual_i, ui, dim_i = entries[i]
            if dim_i < dim_j and dual_j <= dual_i:
                return False, {
                    "method": "support-containment-scan",
                    "violating_messages": [list(ui), list(uj)],
                }
    return True, {"method": "support-containment-scan", "exhaustive": True,
                  "distinct_supports": len(entries)}


def singleton_bound(q: int, m: int, n: int, k: int) -> int:
    """Largest d with km <= max(m,n) * (min(n,m) - d + 1)."""
    hi, lo = max(m, n), min(m, n)
    return lo - (-(-k * m // hi)) + 1


def mrd_label(code: RankCode, cap: int = DEFAULT_ENUM_CAP) -> str:
    """"mrd", "quasi-mrd" (Singleton-optimal, divisibility fails), or "sub-optimal"."""
    q, m, n, k = code.parameters()
    d = code.min_distance(cap=cap)
    d_star = singleton_bound(q, m, n, k)
    if d != d_star:
        return "sub-optimal"
    return "mrd" if (k * m) % max(m, n) == 0 else "quasi-mrd"


def is_mrd(code: RankCode, cap: int = DEFAULT_ENUM_CAP) -> bool:
    return mrd_label(code, cap=cap) == "mrd"


def is_21_separating(code: RankCode, cap: int = PAIR_SCAN_CAP) -> tuple[bool, Certificate]:
    """Linear criterion: rk(c + c') < rk(c) + rk(c') for all nonzero non-proportional pairs.

    Scans projective representative pairs with scalar pairs (1, mu); this covers
    all scalar combinations by homogeneity rk(lam*c + lam*mu*c') = rk(c + mu*c').
    Pairs with rk(c) + rk(c') > min(m, n) hold automatically and are skipped.
    """
    f = code.field
    bound = min(f.m, code.n)
    reps = []
    for u in code.projective_messages(cap=cap):
        c = code.codeword(u)
        reps.append((u, c, rank_of(f, c)))
    reps.sort(key=lambda t: t[2])
    for i in range(len(reps)):
        ui, ci, ri = reps[i]
        if 2 * ri > bound:
            break  # sorted by rank: every remaining pair has rk(c) + rk(c') > min(m, n)
        for j in range(i + 1, len(reps)):
            uj, cj, rj = reps[j]
            if ri + rj > bound:
                break
            for mu in f.nonzero():
                w = tuple(f.add(a, f.mul(mu, b)) for a, b in zip(ci, cj))
                if rank_of(f, w) >= ri + rj:
                    return False, {
                        "method": "pair-scalar-scan",
                        "violating_triple": {
                            "x": list(ci),
                            "y": [0] * code.n,
                            "z": [f.neg(f.mul(mu, b)) for b in cj],
                        },
                        "messages": [list(ui), list(uj)],
                        "scalar": mu,
                    }
    return True, {"method": "pair-scalar-scan", "exhaustive": True}


def is_21_separating_set(field: ExtField, words: Sequence[Vector],
                         cap: int = PAIR_SCAN_CAP) -> bool:
    """Nonlinear-capable literal check over pairwise-distinct triples."""
    words = [tuple(w) for w in words]
    if len(words) ** 3 > cap:
        raise EnumerationCapExceeded(f"{len(words)}^3 triples exceed cap {cap}")
    if len(words) <= 2:
        return True
    f = field
    dist: dict[tuple[int, int], int] = {}

    def d(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in dist:
            diff = tuple(f.sub(a, b) for a, b in zip(words[key[0]], words[key[1]]))
            dist[key] = rank_of(f, diff)
        return dist[key]

    for x in range(len(words)):
        for z in range(x + 1, len(words)):
            for y in range(len(words)):
                if y in (x, z):
                    continue
                if d(x, z) >= d(x, y) + d(y, z):
                    return False
    return True


def descendants(field: ExtField, words: Sequence[Vector]) -> Callable[[Vector], bool]:
    """Membership predicate of the rank-metric descendant set of the given words."""
    words = [tuple(w) for w in words]
    if not words:
        raise InvalidParameters("descendants of the empty set are left undefined")
    n = len(words[0])

    def member(w: Sequence[int]) -> bool:
        inter: FqSubspace | None = None
        for c in words:
            diff = tuple(field.sub(a, b) for a, b in zip(w, c))
            s = support(field, diff)
            inter = s if inter is None else inter.intersect(s)
            if inter.dim == 0:
                return True
        return inter.dim == 0

    return member


def is_2_rank_frameproof(code: RankCode, cap: int = PAIR_SCAN_CAP) -> tuple[bool, Certificate]:
    """Pairwise-descendant condition; reduces to the intersecting pair scan by linearity.

    On codes with at most TRIPLE_SCAN_WORD_LIMIT words the literal triple scan
    over sigma(x-c) cap sigma(x-c') is also run and must agree.
    """
    verdict, cert = is_rank_intersecting(code, cap=cap)
    cert = dict(cert)
    cert["reduction"] = "pair-scan-by-linearity"
    word_count = code.field.order**code.k
    if word_count <= TRIPLE_SCAN_WORD_LIMIT:
        literal = _literal_frameproof_scan(code)
        if literal != verdict:
            raise AssertionError(
                "literal triple scan disagrees with the reduced pair scan; "
                "this indicates a bug in the support machinery"
            )
        cert["literal_triple_scan"] = "agrees"
    return verdict, cert


def _all_codewords(code: RankCode) -> list[Vector]:
    f = code.field
    words = []
    for value in range(f.order**code.k):
        u = []
        v = value
        for _ in range(code.k):
            u.append(v % f.order)
            v //= f.order
        words.append(code.codeword(u))
    return words


def _literal_frameproof_scan(code: RankCode) -> bool:
    """For all distinct c, c' and x outside {c, c'}: sigma(x-c) cap sigma(x-c') != 0.

    Supports only depend on the projective class of a word, so the triple scan
    consults a precomputed class-pair triviality table. For q = 2 the x-loop is
    vectorized through packed-word XOR differences.
    """
    f = code.field
    words = _all_codewords(code)
    n_words = len(words)
    class_of = [0] * n_words
    class_reps: dict[Vector, int] = {}
    for i, w in enumerate(words):
        if i == 0:
            class_of[i] = -1  # zero word, never consulted
            continue
        lead = next(v for v in w if v)
        key = tuple(f.mul(f.inv(lead), v) for v in w)
        class_of[i] = class_reps.setdefault(key, len(class_reps))
    rep_words = sorted(class_reps, key=class_reps.get)
    supports = [support(f, w) for w in rep_words]
    n_cls = len(supports)
    trivial = [
        [supports[a].intersect(supports[b]).dim == 0 for b in range(n_cls)]
        for a in range(n_cls)
    ]
    if f.q == 2:
        import numpy as np

        packed = np.empty(n_words, np.int64)
        for i, w in enumerate(words):
            acc = 0
            for v in reversed(w):
                acc = (acc << f.m) | v
            packed[i] = acc
        cls_by_packed = np.empty(1 << (f.m * code.n), np.int32) if f.m * code.n <= 24 else None
        if cls_by_packed is None:
            lookup = {int(p): class_of[i] for i, p in enumerate(packed)}
        else:
            cls_by_packed[packed] = np.array(class_of, np.int32)
        trivial_nb = np.array(trivial, bool)
        for c in range(n_words):
            diff_c = packed ^ packed[c]
            cls_c = cls_by_packed[diff_c] if cls_by_packed is not None else np.array(
                [lookup[int(p)] for p in diff_c], np.int32
            )
            for cp in range(c + 1, n_words):
                diff_cp = packed ^ packed[cp]
                cls_cp = cls_by_packed[diff_cp] if cls_by_packed is not None else np.array(
                    [lookup[int(p)] for p in diff_cp], np.int32
                )
                bad = trivial_nb[cls_c, cls_cp]
                bad[c] = False
                bad[cp] = False
                if bad.any():
                    return False
        return True
    word_index = {w: i for i, w in enumerate(words)}
    diffs = [[0] * n_words for _ in range(n_words)]
    for x in range(n_words):
        wx = words[x]
        for c in range(n_words):
            if x == c:
                diffs[x][c] = -1
                continue
            diff = tuple(f.sub(a, b) for a, b in zip(wx, words[c]))
            diffs[x][c] = class_of[word_index[diff]]
    for c in range(n_words):
        for cp in range(c + 1, n_words):
            for x in range(n_words):
                if x == c or x == cp:
                    continue
                if trivial[diffs[x][c]][diffs[x][cp]]:
                    return False
    return True


# --- feasibility -------------------------------------------------------------


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Existence verdict for nondegenerate rank-intersecting [n,k]_{q^m/q} codes."""

    q: int
    m: int
    k: int
    n: int | None
    d: int | None
    verdict: str  # Impossible | KnownConstructible | Open
    tag: str

    def as_dict(self) -> dict:
        return {
            "q": self.q, "m": self.m, "k": self.k, "n": self.n, "d": self.d,
            "verdict": self.verdict, "tag": self.tag,
        }


def feasibility(q: int, m: int, k: int, n: int | None = None,
                d: int | None = None) -> FeasibilityVerdict:
    """Ordered verdict rules for the existence of rank-intersecting codes."""
    if not is_prime(q) or m < 1 or k < 1:
        raise InvalidParameters(f"need prime q and m, k >= 1; got q={q}, m={m}, k={k}")
    if n is not None and n < 1:
        raise InvalidParameters(f"n = {n} must be >= 1")
    if d is not None and d < 1:
        raise InvalidParameters(f"d = {d} must be >= 1")

    def make(verdict: str, tag: str) -> FeasibilityVerdict:
        return FeasibilityVerdict(q=q, m=m, k=k, n=n, d=d, verdict=verdict, tag=tag)

    if k == 1:
        # any nonzero word is self-intersecting; nondegeneracy forces rank n, so
        # n <= m and every nonzero word has rank exactly n (hence d = n)
        if n is not None and n > m:
            return make("Impossible", "k1-nondegeneracy")
        if d is not None and n is not None and d != n:
            return make("Impossible", "k1-distance-equals-length")
        return make("KnownConstructible", "k1-elementary")
    if n is not None and n < 2 * k - 1:
        return make("Impossible", "length-lower-bound")
    if n is not None and n > 2 * m - 3:
        return make("Impossible", "length-upper-bound")
    if d is not None and (d < k or d > m):
        return make("Impossible", "distance-bounds")
    if (m, k) == (5, 3) and n == 7:
        return make("Impossible", "m5k3-length-7")
    if (q, m, k, n) == (2, 5, 3, 6):
        return make("Impossible", "binary-m5k3-length-6-search")
    if 2 <= k <= (m + 1) // 2:
        if n is None:
            return make("KnownConstructible", "constructive-range")
        if 2 * k - 1 <= n <= 2 * m - 2 * k + 1:
            return make("KnownConstructible", "constructive-range")
    if n is None and 2 * k - 1 > 2 * m - 3:
        return make("Impossible", "length-bounds-incompatible")
    return make("Open", "gray-area")


# --- report orchestration ------------------------------------------------------


PROPERTY_NAMES = (
    "nondegenerate",
    "distance",
    "intersecting",
    "hamming_intersecting",
    "minimal",
    "mrd",
    "separating",
    "frameproof",
    "spannable",
    "scattered",
    "scattered_hyperplanes",
)

DEFAULT_PROPERTIES = (
    "nondegenerate",
    "distance",
    "intersecting",
    "minimal",
    "mrd",
    "separating",
    "frameproof",
    "spannable",
)


@dataclass
class PropertyReport:
    """Verdicts, certificates and timings for one code."""

    code_id: str
    parameters: dict
    modulus: list[int]
    verdicts: dict = dataclass_field(default_factory=dict)
    measurements: dict = dataclass_field(default_factory=dict)
    certificates: dict = dataclass_field(default_factory=dict)
    timings_ms: dict = dataclass_field(default_factory=dict)

    def merged_results(self) -> dict:
        return {**self.verdicts, **self.measurements}

    def as_dict(self) -> dict:
        return {
            "code": {"id": self.code_id, **self.parameters},
            "modulus": self.modulus,
            "verdicts": self.verdicts,
            "measurements": self.measurements,
            "certificates": self.certificates,
            "timings_ms": self.timings_ms,
        }


def evaluate_properties(code: RankCode, names: Sequence[str] = DEFAULT_PROPERTIES,
                        cap: int = PAIR_SCAN_CAP) -> PropertyReport:
    """Run the selected properties, recording a certificate for every verdict."""
    unknown = [p for p in names if p not in PROPERTY_NAMES]
    if unknown:
        raise InvalidParameters(f"unknown properties {unknown}; known: {list(PROPERTY_NAMES)}")
    q, m, n, k = code.parameters()
    report = PropertyReport(
        code_id=code.name or f"code_{q}_{m}_{n}_{k}",
        parameters={"q": q, "m": m, "n": n, "k": k},
        modulus=list(code.field.modulus),
    )
    nondeg = code.is_nondegenerate()
    system: QSystem | None = None

    def timed(name: str, fn):
        start = time.perf_counter()
        result = fn()
        report.timings_ms[name] = round((time.perf_counter() - start) * 1000, 3)
        return result

    for name in names:
        try:
            if name == "nondegenerate":
                report.verdicts[name] = timed(name, lambda: nondeg)
                report.certificates[name] = {"method": "expanded-column-rank"}
            elif name == "distance":
                value = timed(name, lambda: code.min_distance(cap=cap))
                report.measurements["distance"] = value
                report.measurements["weight_spectrum"] = {
                    str(r): c for r, c in code.weight_spectrum(cap=cap).items()
                }
            elif name == "mrd":
                label = timed(name, lambda: mrd_label(code, cap=cap))
                report.verdicts[name] = label == "mrd"
                report.measurements["mrd_label"] = label
                report.measurements["singleton_bound"] = singleton_bound(q, m, n, k)
                report.certificates[name] = {"method": "singleton-formula"}
            elif name in ("intersecting", "minimal", "frameproof", "spannable",
                          "scattered", "scattered_hyperplanes"):
                if not nondeg:
                    report.verdicts[name] = "skipped"
                    report.certificates[name] = {"reason": "degenerate code"}
                    continue
                if name == "intersecting":
                    verdict, cert = timed(name, lambda: is_rank_intersecting(code, cap=cap))
                elif name == "minimal":
                    verdict, cert = timed(name, lambda: is_minimal(code, cap=cap))
                elif name == "frameproof":
                    verdict, cert = timed(name, lambda: is_2_rank_frameproof(code, cap=cap))
                elif name == "spannable":
                    if k < 2:
                        report.verdicts[name] = "skipped"
                        report.certificates[name] = {"reason": "k = 1"}
                        continue
                    if system is None:
                        system = q_system_of(code)
                    sys_ref = system
                    verdict, witness = timed(name, lambda: is_2_spannable(sys_ref, cap=cap))
                    cert = (
                        {"witness": {"h1": list(witness.h1), "h2": list(witness.h2),
                                     "w1": witness.w1, "w2": witness.w2}}
                        if witness is not None
                        else {"method": "hyperplane-pair-scan", "exhaustive": True}
                    )
                elif name == "scattered":
                    if system is None:
                        system = q_system_of(code)
                    sys_ref = system
                    verdict = timed(name, lambda: is_scattered(sys_ref, cap=cap))
                    cert = {"method": "point-weight-spectrum"}
                else:  # scattered_hyperplanes
                    if system is None:
                        system = q_system_of(code)
                    sys_ref = system
                    from .geometry import is_scattered_wrt_hyperplanes

                    verdict = timed(name, lambda: is_scattered_wrt_hyperplanes(sys_ref, cap=cap))
                    cert = {"method": "hyperplane-weight-scan"}
                report.verdicts[name] = verdict
                report.certificates[name] = cert
            elif name == "hamming_intersecting":
                verdict, cert = timed(name, lambda: is_hamming_intersecting(code, cap=cap))
                report.verdicts[name] = verdict
                report.certificates[name] = cert
            elif name == "separating":
                verdict, cert = timed(name, lambda: is_21_separating(code, cap=cap))
                report.verdicts[name] = verdict
                report.certificates[name] = cert
        except EnumerationCapExceeded as exc:
            report.verdicts[name] = "skipped"
            report.certificates[name] = {"reason": f"enumeration cap: {exc}"}
    return report
