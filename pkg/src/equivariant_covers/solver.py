"""Numerical cross-check of cover_count by homotopy continuation.

For a valid problem and random lambda the square system

    psi(P_0, P_inf) = mu * prod_l R_l^l     (coefficients x^0 .. x^b)
    a_beta . z_beta = 1                     (one per projective block)

is solved with a total-degree start system and the random gamma trick,
its finite solutions are filtered down to honest covers with the requested
ramification, and the survivors are counted against the closed formula.

Paths are tracked in fixed chunks of ``chunk_size`` paths; a chunk's result
depends only on its path indices, so reports are identical for any number
of worker threads.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .count import cover_count
from .errors import (
    CoverError,
    PrecisionExhausted,
    TrackingBudgetExceeded,
    UnbalancedSystem,
)
from .poly import COMPLEX, Poly
from .problem import ProblemSpec, require_valid
from .rampoly import CoverFunction, branch_profile, build_psi, in_U, leading_overflow
from .util import canonical_json, complex_pair, sha256_hex

log = logging.getLogger("equivariant_covers.solver")

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"
REJECT_REASONS = ("residual", "duplicate", "outside_U", "profile", "singular")

# path status codes
_ACTIVE, _DONE, _DIVERGED, _FAILED = 0, 1, 2, 3

_H_START = 0.01
_H_MAX = 0.1
_H_MIN = 1e-14
_NEWTON_TOL = 1e-8
_REFINE_ITERS = 6


@dataclass(frozen=True)
class ToleranceSet:
    residual_tol: float = 1e-10
    dedup_radius: float = 1e-6
    singular_tol: float = 1e-8
    divergence_norm: float = 1e8
    step_budget: int = 10_000
    cluster_radius: float = 1e-5
    precision: int = 53
    threads: int = 1
    chunk_size: int = 64

    def __post_init__(self):
        for name in ("residual_tol", "dedup_radius", "singular_tol", "divergence_norm", "cluster_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.step_budget < 1 or self.threads < 1 or self.chunk_size < 1:
            raise ValueError("step_budget, threads and chunk_size must be >= 1")
        if self.precision < 53:
            raise ValueError(f"precision must be >= 53 bits, got {self.precision}")

    def to_json(self, *, include_execution: bool = False) -> Dict[str, Any]:
        """Tolerance values; ``threads`` only with include_execution since it never changes results."""
        out = asdict(self)
        if not include_execution:
            out.pop("threads")
        return out

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ToleranceSet":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)


def _bmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise product of coefficient arrays (P, na) x (P, nb) -> (P, na + nb - 1)."""
    out = np.zeros((a.shape[0], a.shape[1] + b.shape[1] - 1), dtype=complex)
    for i in range(a.shape[1]):
        out[:, i : i + b.shape[1]] += a[:, i : i + 1] * b
    return out


def _bpow(a: np.ndarray, n: int) -> np.ndarray:
    out = np.ones((a.shape[0], 1), dtype=complex)
    for _ in range(n):
        out = _bmul(out, a)
    return out


def _solve(A: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Batched A x = rhs; rows with a singular A come back as NaN."""
    try:
        return np.linalg.solve(A, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full(rhs.shape, np.nan, dtype=complex)
        for p in range(A.shape[0]):
            try:
                out[p] = np.linalg.solve(A[p], rhs[p])
            except np.linalg.LinAlgError:
                pass
        return out


def _sup(a: np.ndarray) -> np.ndarray:
    return np.max(np.abs(a), axis=-1)


@dataclass(frozen=True, eq=False)
class PolySystem:
    spec: ProblemSpec
    seed: int
    lam: Tuple[complex, ...]
    blocks: Tuple[Tuple[str, int], ...]
    levels: Tuple[int, ...]
    b: int
    normalizers: Tuple[np.ndarray, ...]
    psi_tensor: np.ndarray  # (b + 1, n0, ninf)
    gamma: complex

    @property
    def n_unknowns(self) -> int:
        return sum(size for _, size in self.blocks)

    @property
    def n_equations(self) -> int:
        return self.b + 1 + len(self.normalizers)

    @property
    def offsets(self) -> Dict[str, slice]:
        out, pos = {}, 0
        for name, size in self.blocks:
            out[name] = slice(pos, pos + size)
            pos += size
        return out

    @property
    def projective_blocks(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.blocks if name != "mu")

    @property
    def degree(self) -> int:
        """Total degree of every coefficient-matching equation."""
        return max(2, 1 + sum(self.levels))

    @property
    def degrees(self) -> Tuple[int, ...]:
        return (self.degree,) * (self.b + 1) + (1,) * len(self.normalizers)

    # F and its Jacobian, batched over rows of z

    def _parts(self, z: np.ndarray):
        o = self.offsets
        p0, pinf, mu = z[:, o["P0"]], z[:, o["Pinf"]], z[:, o["mu"]][:, 0]
        Rs = [z[:, o[f"R{lv}"]] for lv in self.levels]
        return p0, pinf, Rs, mu

    def _rho(self, Rs: Sequence[np.ndarray]) -> Tuple[np.ndarray, List[np.ndarray]]:
        powers = [_bpow(R, lv) for R, lv in zip(Rs, self.levels)]
        rho = np.ones((Rs[0].shape[0], 1), dtype=complex)
        for pw in powers:
            rho = _bmul(rho, pw)
        partials = []
        for i, (R, lv) in enumerate(zip(Rs, self.levels)):
            g = lv * _bpow(R, lv - 1)
            for j, pw in enumerate(powers):
                if j != i:
                    g = _bmul(g, pw)
            partials.append(g)
        return rho, partials

    def coefficient_residual(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """psi - mu * rho and psi itself, each (P, b + 1)."""
        p0, pinf, Rs, mu = self._parts(z)
        psi = np.einsum("kij,pi,pj->pk", self.psi_tensor, p0, pinf, optimize=False)
        rho, _ = self._rho(Rs)
        return psi - mu[:, None] * rho, psi

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        coef, _ = self.coefficient_residual(z)
        o = self.offsets
        norms = [
            z[:, o[name]] @ a - 1.0 for name, a in zip(self.projective_blocks, self.normalizers)
        ]
        return np.concatenate([coef, np.stack(norms, axis=1)], axis=1)

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        p0, pinf, Rs, mu = self._parts(z)
        o = self.offsets
        n_rows = self.b + 1
        J = np.zeros((z.shape[0], self.n_equations, self.n_unknowns), dtype=complex)
        J[:, :n_rows, o["P0"]] = np.einsum("kij,pj->pki", self.psi_tensor, pinf, optimize=False)
        J[:, :n_rows, o["Pinf"]] = np.einsum("kij,pi->pkj", self.psi_tensor, p0, optimize=False)
        rho, partials = self._rho(Rs)
        for lv, g in zip(self.levels, partials):
            block = o[f"R{lv}"]
            for c in range(block.stop - block.start):
                J[:, c : c + g.shape[1], block.start + c] = -mu[:, None] * g
        J[:, :n_rows, o["mu"].start] = -rho
        for row, (name, a) in enumerate(zip(self.projective_blocks, self.normalizers), n_rows):
            J[:, row, o[name]] = a
        return J

    def unpack(self, z: np.ndarray) -> Tuple[CoverFunction, Dict[int, Poly], complex]:
        o = self.offsets
        cf = CoverFunction(
            self.lam,
            self.spec.ord,
            Poly.numeric(z[o["P0"]]),
            Poly.numeric(z[o["Pinf"]]),
            self.spec.base.r,
        )
        R = {lv: Poly.numeric(z[o[f"R{lv}"]]) for lv in self.levels}
        return cf, R, complex(z[o["mu"]][0])


def _sample_lambda(rng: np.random.Generator, m: int) -> np.ndarray:
    # uniform on the annulus 0.5 <= |lambda| <= 2
    while True:
        radius = np.sqrt(rng.uniform(0.25, 4.0, m))
        angle = rng.uniform(0.0, 2 * np.pi, m)
        lam = radius * np.exp(1j * angle)
        gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(m) * 1e9
        if gaps.min() >= 1e-2:
            return lam


def _unit_functional(rng: np.random.Generator, size: int) -> np.ndarray:
    a = rng.normal(size=size) + 1j * rng.normal(size=size)
    return a / np.linalg.norm(a)


def build_system(spec: ProblemSpec, seed: int, *, validate: bool = True) -> PolySystem:
    r = spec.base.r
    if validate:
        require_valid(spec)
    n0, ninf = spec.t0 // r + 1, spec.tinf // r + 1
    overflow = leading_overflow(spec.ord, r, n0 - 1, ninf - 1)
    if overflow:
        raise UnbalancedSystem(
            f"x^(b+1) coefficient of psi is {overflow} * lc(P_0) * lc(P_inf), not 0: "
            f"sum(ord) = {sum(spec.ord)} but tinf - t0 = {spec.tinf - spec.t0}"
        )

    levels_count: Dict[int, int] = {}
    for bj in spec.B:
        levels_count[bj - 1] = levels_count.get(bj - 1, 0) + 1
    levels = tuple(sorted(levels_count))
    b = sum(bj - 1 for bj in spec.B)

    rng = np.random.default_rng(seed)
    lam = _sample_lambda(rng, spec.base.m)
    blocks = [("P0", n0), ("Pinf", ninf)]
    blocks += [(f"R{lv}", levels_count[lv] + 1) for lv in levels]
    normalizers = tuple(_unit_functional(rng, size) for _, size in blocks)
    blocks.append(("mu", 1))
    gamma = complex(np.exp(2j * np.pi * np.random.default_rng([seed, 1]).uniform()))

    # psi is bilinear in (P_0, P_inf): tabulate it on monomial pairs
    lam_t = tuple(complex(v) for v in lam)
    tensor = np.zeros((b + 1, n0, ninf), dtype=complex)
    for i in range(n0):
        for j in range(ninf):
            p0, pinf = Poly.monomial(i, 1, COMPLEX), Poly.monomial(j, 1, COMPLEX)
            psi = build_psi(CoverFunction(lam_t, spec.ord, p0, pinf, r))
            tensor[:, i, j] = [complex(psi.coeff(k)) for k in range(b + 1)]

    system = PolySystem(
        spec=spec,
        seed=seed,
        lam=lam_t,
        blocks=tuple(blocks),
        levels=levels,
        b=b,
        normalizers=normalizers,
        psi_tensor=tensor,
        gamma=gamma,
    )
    if system.n_equations != system.n_unknowns:
        raise UnbalancedSystem(
            f"{system.n_equations} equations for {system.n_unknowns} unknowns"
        )
    return system


def expected_paths(sys: PolySystem) -> int:
    """Bezout number of the total-degree start system."""
    return sys.degree ** (sys.b + 1)


@dataclass(frozen=True)
class RawPoint:
    path: int
    z: np.ndarray


@dataclass(frozen=True)
class SolveResult:
    points: Tuple[RawPoint, ...]
    paths_tracked: int
    paths_diverged: int
    paths_failed: int
    steps: int


class _Homotopy:
    """H(z, t) = (1 - t) * gamma * G(z) + t * F(z), G_i = z_i^d_i - 1."""

    def __init__(self, sys: PolySystem):
        self.sys = sys
        self.nb = sys.b + 1

    def start(self, paths: np.ndarray) -> np.ndarray:
        sys = self.sys
        d = sys.degree
        z = np.ones((len(paths), sys.n_unknowns), dtype=complex)
        rest = paths.copy()
        for i in range(sys.b + 1):
            z[:, i] = np.exp(2j * np.pi * (rest % d) / d)
            rest //= d
        return z

    def _g(self, z):
        d, nb = self.sys.degree, self.nb
        g, dg = z - 1.0, np.ones_like(z)
        g[:, :nb] = z[:, :nb] ** d - 1.0
        dg[:, :nb] = d * z[:, :nb] ** (d - 1)
        return g, dg

    def value(self, z, t):
        g, _ = self._g(z)
        return (1 - t)[:, None] * self.sys.gamma * g + t[:, None] * self.sys.evaluate(z)

    def dz(self, z, t):
        _, dg = self._g(z)
        J = t[:, None, None] * self.sys.jacobian(z)
        idx = np.arange(z.shape[1])
        J[:, idx, idx] += (1 - t)[:, None] * self.sys.gamma * dg
        return J

    def velocity(self, z, t):
        g, _ = self._g(z)
        ht = self.sys.evaluate(z) - self.sys.gamma * g
        return -_solve(self.dz(z, t), ht)

    def correct(self, z, t):
        """At most three Newton steps; returns (z, converged)."""
        z = z.copy()
        conv = np.zeros(len(z), dtype=bool)
        bad = ~np.all(np.isfinite(z), axis=1)
        prev = None
        for _ in range(3):
            todo = ~conv & ~bad
            if not todo.any():
                break
            delta = -_solve(self.dz(z[todo], t[todo]), self.value(z[todo], t[todo]))
            nrm = _sup(delta)
            finite = np.isfinite(nrm)
            z[todo] = np.where(finite[:, None], z[todo] + np.nan_to_num(delta), z[todo])
            rows = np.flatnonzero(todo)
            bad[rows[~finite]] = True
            done = finite & (nrm <= _NEWTON_TOL * (1.0 + _sup(z[todo])))
            conv[rows[done]] = True
            if prev is not None:
                bad[rows[finite & ~done & (nrm > 0.5 * prev[todo])]] = True
            full = np.full(len(z), np.inf)
            full[rows] = nrm
            prev = full
        return z, conv & ~bad


def _refine(sys: PolySystem, z: np.ndarray) -> np.ndarray:
    z = z.copy()
    for _ in range(_REFINE_ITERS):
        delta = -_solve(sys.jacobian(z), sys.evaluate(z))
        ok = np.all(np.isfinite(delta), axis=1)
        z[ok] += delta[ok]
    return z


def _track_chunk(
    sys: PolySystem, params: ToleranceSet, first: int, count: int, strict: bool
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    hom = _Homotopy(sys)
    paths = np.arange(first, first + count)
    z = hom.start(paths)
    t = np.zeros(count)
    h = np.full(count, _H_START)
    wins = np.zeros(count, dtype=int)
    steps = np.zeros(count, dtype=int)
    status = np.full(count, _ACTIVE)

    while True:
        act = np.flatnonzero(status == _ACTIVE)
        if not len(act):
            break
        za, ta = z[act], t[act]
        ha = np.minimum(h[act], 1.0 - ta)

        k1 = hom.velocity(za, ta)
        k2 = hom.velocity(za + 0.5 * ha[:, None] * k1, ta + 0.5 * ha)
        k3 = hom.velocity(za + 0.5 * ha[:, None] * k2, ta + 0.5 * ha)
        k4 = hom.velocity(za + ha[:, None] * k3, ta + ha)
        pred = za + (ha / 6.0)[:, None] * (k1 + 2 * k2 + 2 * k3 + k4)
        t_new = np.where(1.0 - (ta + ha) < 1e-15, 1.0, ta + ha)
        z_new, ok = hom.correct(pred, t_new)

        steps[act] += 1
        acc, rej = act[ok], act[~ok]
        z[acc], t[acc] = z_new[ok], t_new[ok]
        wins[acc] += 1
        grow = acc[wins[acc] >= 3]
        h[grow] = np.minimum(2 * h[grow], _H_MAX)
        wins[grow] = 0
        h[rej] /= 2
        wins[rej] = 0

        status[acc[t[acc] >= 1.0]] = _DONE
        status[acc[_sup(z[acc]) > params.divergence_norm]] = _DIVERGED
        status[rej[h[rej] < _H_MIN]] = _FAILED
        over = act[(status[act] == _ACTIVE) & (steps[act] >= params.step_budget)]
        if len(over):
            if strict:
                raise TrackingBudgetExceeded(
                    f"path {first + over[0]} used {params.step_budget} steps at t = {t[over[0]]:.6g}"
                )
            status[over] = _FAILED

    done = np.flatnonzero(status == _DONE)
    if len(done):
        z[done] = _refine(sys, z[done])
        blown = done[~np.isfinite(_sup(z[done])) | (_sup(z[done]) > params.divergence_norm)]
        status[blown] = _DIVERGED
    log.debug(
        "paths %d..%d: %d finite, %d diverged, %d failed, %d steps",
        first,
        first + count - 1,
        int(np.sum(status == _DONE)),
        int(np.sum(status == _DIVERGED)),
        int(np.sum(status == _FAILED)),
        int(steps.sum()),
    )
    return z, status, steps


def solve_total_degree(sys: PolySystem, params: ToleranceSet, *, strict: bool = False) -> SolveResult:
    """Track every start path; ``strict`` turns an exhausted step budget into an error."""
    total = expected_paths(sys)
    chunks = [(s, min(params.chunk_size, total - s)) for s in range(0, total, params.chunk_size)]

    def run(chunk):
        return _track_chunk(sys, params, chunk[0], chunk[1], strict)

    if params.threads > 1:
        with ThreadPoolExecutor(max_workers=params.threads) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(c) for c in chunks]

    points: List[RawPoint] = []
    diverged = failed = steps = 0
    for (first, _), (z, status, n_steps) in zip(chunks, results):
        diverged += int(np.sum(status == _DIVERGED))
        failed += int(np.sum(status == _FAILED))
        steps += int(n_steps.sum())
        for i in np.flatnonzero(status == _DONE):
            points.append(RawPoint(first + int(i), z[i].copy()))
    points.sort(key=lambda p: p.path)
    return SolveResult(tuple(points), total, diverged, failed, steps)


def _projective_rep(sys: PolySystem, z: np.ndarray) -> Tuple[np.ndarray, complex]:
    """Blocks divided by their largest-magnitude entry, and the matching mu."""
    o = sys.offsets
    parts, scales = [], {}
    for name in sys.projective_blocks:
        blk = z[o[name]]
        s = blk[int(np.argmax(np.abs(blk)))]
        scales[name] = s
        parts.append(blk / s)
    mu = complex(z[o["mu"]][0]) / (scales["P0"] * scales["Pinf"])
    for lv in sys.levels:
        mu *= scales[f"R{lv}"] ** lv
    return np.concatenate(parts), mu


def solution_residual(sys: PolySystem, z: np.ndarray) -> float:
    """sup |psi - mu rho| / max(1, sup |psi|) on the normalized representative."""
    rep, mu = _projective_rep(sys, z)
    w = np.concatenate([rep, [mu]])[None, :]
    coef, psi = sys.coefficient_residual(w)
    return float(_sup(coef)[0] / max(1.0, float(_sup(psi)[0])))


def psi_coefficient_error(sys: PolySystem, z: np.ndarray) -> float:
    """sup |psi - mu rho| / sup |psi|: how far psi is from having the multiple roots of rho."""
    rep, mu = _projective_rep(sys, z)
    coef, psi = sys.coefficient_residual(np.concatenate([rep, [mu]])[None, :])
    top = float(_sup(psi)[0])
    return float(_sup(coef)[0]) / top if top > 0 else math.inf


def jacobian_rcond(sys: PolySystem, z: np.ndarray) -> float:
    J = sys.jacobian(z[None, :])[0]
    rows = np.max(np.abs(J), axis=1)
    J = J / np.where(rows > 0, rows, 1.0)[:, None]
    cols = np.max(np.abs(J), axis=0)
    J = J / np.where(cols > 0, cols, 1.0)[None, :]
    sv = np.linalg.svd(J, compute_uv=False)
    return float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0


@dataclass(frozen=True)
class AcceptedSolution:
    path: int
    cover: CoverFunction
    residual: float
    rcond: float


@dataclass(frozen=True)
class FilterResult:
    accepted: Tuple[AcceptedSolution, ...]
    rejected: Dict[str, int] = field(default_factory=dict)

    @property
    def covers(self) -> List[CoverFunction]:
        return [a.cover for a in self.accepted]


def filter_solutions(
    raw: SolveResult, spec: ProblemSpec, sys: PolySystem, params: ToleranceSet
) -> FilterResult:
    rejected = {reason: 0 for reason in REJECT_REASONS}
    target = tuple(sorted(spec.B))
    r = spec.base.r
    nominal = (spec.t0 // r, spec.tinf // r)

    kept: List[Tuple[RawPoint, float, np.ndarray]] = []
    for point in sorted(raw.points, key=lambda p: p.path):
        res = solution_residual(sys, point.z)
        if not res < params.residual_tol:
            rejected["residual"] += 1
            continue
        rep, _ = _projective_rep(sys, point.z)
        if any(_sup(rep - other) <= params.dedup_radius for _, _, other in kept):
            rejected["duplicate"] += 1
            continue
        kept.append((point, res, rep))

    accepted: List[AcceptedSolution] = []
    for point, res, _ in kept:
        cf, _, _ = sys.unpack(point.z)
        if not in_U(cf, degrees=nominal, radius=params.cluster_radius):
            rejected["outside_U"] += 1
            continue
        try:
            profile = branch_profile(
                cf,
                params.cluster_radius,
                expected_b=sys.b,
                max_precision=4 * params.precision,
                coeff_error=psi_coefficient_error(sys, point.z),
            )
        except PrecisionExhausted:
            rejected["profile"] += 1
            continue
        if profile.indices != target or not profile.distinct_away_from_zero_and_infinity(
            params.cluster_radius
        ):
            rejected["profile"] += 1
            continue
        rc = jacobian_rcond(sys, point.z)
        if rc < params.singular_tol:
            rejected["singular"] += 1
            continue
        accepted.append(AcceptedSolution(point.path, cf, res, rc))
    return FilterResult(tuple(accepted), rejected)


@dataclass(frozen=True)
class VerifyReport:
    spec_hash: str
    trial: int
    seed: int
    lam: Tuple[complex, ...]
    paths_tracked: int
    paths_diverged: int
    paths_failed: int
    raw_finite: int
    rejected: Dict[str, int]
    accepted: int
    expected: int
    max_residual: Optional[float]
    min_rcond: Optional[float]
    verdict: str
    params: ToleranceSet
    error: Optional[str] = None
    wall_time: float = 0.0

    def to_json(self, *, timing: bool = True) -> Dict[str, Any]:
        out = {
            "spec_hash": self.spec_hash,
            "trial": self.trial,
            "seed": self.seed,
            "lambda": [complex_pair(v) for v in self.lam],
            "paths_tracked": self.paths_tracked,
            "paths_diverged": self.paths_diverged,
            "paths_failed": self.paths_failed,
            "raw_finite": self.raw_finite,
            "rejected": dict(self.rejected),
            "accepted": self.accepted,
            "expected": self.expected,
            "max_residual": self.max_residual,
            "min_rcond": self.min_rcond,
            "verdict": self.verdict,
            "error": self.error,
            "params": self.params.to_json(),
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def spec_hash(spec: ProblemSpec) -> str:
    return sha256_hex(canonical_json(spec.to_json()))


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def run_trial(spec: ProblemSpec, trial: int, seed: int, params: ToleranceSet) -> VerifyReport:
    expected = cover_count(spec).total
    s = trial_seed(seed, trial)
    started = time.perf_counter()
    base = dict(spec_hash=spec_hash(spec), trial=trial, seed=s, expected=expected, params=params)
    try:
        sys = build_system(spec, s)
        raw = solve_total_degree(sys, params)
        kept = filter_solutions(raw, spec, sys, params)
    except CoverError as e:
        log.warning("trial %d: %s: %s", trial, type(e).__name__, e)
        return VerifyReport(
            lam=(),
            paths_tracked=0,
            paths_diverged=0,
            paths_failed=0,
            raw_finite=0,
            rejected={reason: 0 for reason in REJECT_REASONS},
            accepted=0,
            max_residual=None,
            min_rcond=None,
            verdict=ERROR,
            error=f"{type(e).__name__}: {e}",
            wall_time=time.perf_counter() - started,
            **base,
        )
    n = len(kept.accepted)
    report = VerifyReport(
        lam=sys.lam,
        paths_tracked=raw.paths_tracked,
        paths_diverged=raw.paths_diverged,
        paths_failed=raw.paths_failed,
        raw_finite=len(raw.points),
        rejected=kept.rejected,
        accepted=n,
        max_residual=max((a.residual for a in kept.accepted), default=None),
        min_rcond=min((a.rcond for a in kept.accepted), default=None),
        verdict=PASS if n == expected else FAIL,
        wall_time=time.perf_counter() - started,
        **base,
    )
    log.info(
        "trial %d: %s accepted=%d expected=%d (finite %d of %d paths) in %.2fs",
        trial,
        report.verdict,
        n,
        expected,
        report.raw_finite,
        report.paths_tracked,
        report.wall_time,
    )
    return report


def verify_count(
    spec: ProblemSpec, trials: int, seed: int, params: Optional[ToleranceSet] = None
) -> List[VerifyReport]:
    require_valid(spec)
    params = params or ToleranceSet()
    return [run_trial(spec, trial, seed, params) for trial in range(trials)]
