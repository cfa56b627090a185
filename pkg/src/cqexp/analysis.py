"""Channel-level quantities: optimized Renyi information, capacity, and
the error-exponent bounds built from them.

The alpha-parametrized objective ((1-a)/a) * (I_a(N) - r) is maximized
over two ranges: [1/2, 1] for the achievability (lower) bound and
(alpha_min, 1] for the sphere-packing (upper) bound. Each evaluation of
I_a(N) is itself a maximization over priors, so a :class:`ChannelAnalysis`
session caches those inner optimizations and warm-starts nearby ones.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import CQChannel
from .config import DEFAULT_CONFIG, LN_BASE, RunConfig, worker_count
from .divergences import check_alpha, letter_powers, mi_values_from_powers
from .errors import InvalidGrid, NumericalInstability, RateAboveCapacity, TooLarge
from .linalg import mat_power, tensor_all, von_neumann_entropy
from .simplex_opt import SimplexMaximum, maximize_on_simplex
from .typeclasses import TypeClass, enumerate_sequences, enumerate_types

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizationReport:
    """Result of maximizing a channel quantity over input priors."""

    value: float
    prior: np.ndarray
    iterations: int
    converged: bool
    multistart_count: int


@dataclass(frozen=True)
class BoundResult:
    """One exponent bound: its value, optimizing alpha, and whether the
    alpha search saturated at the truncated lower endpoint."""

    value: float
    alpha: float
    saturated: bool = False


@dataclass(frozen=True)
class ReliabilityResult:
    """Reliability-function output: exact value or a bounding interval."""

    kind: str  # "exact" | "interval"
    lower: float
    upper: float


@dataclass(frozen=True)
class ExponentRow:
    rate: float
    lower: float
    upper: float
    equal: bool
    alpha_lower: float
    alpha_upper: float
    upper_saturated: bool = False


@dataclass(frozen=True)
class ExponentCurve:
    rows: tuple[ExponentRow, ...]
    critical_rate: float
    capacity: float

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        slack = 1e-8
        for row in rows:
            if row.lower > row.upper + slack:
                raise NumericalInstability(
                    f"lower bound exceeds upper at r={row.rate}: {row.lower} > {row.upper}"
                )
        for a, b in zip(rows, rows[1:]):
            if b.rate <= a.rate:
                raise InvalidGrid("curve rates must be strictly increasing")
            if b.lower > a.lower + slack or b.upper > a.upper + slack:
                raise NumericalInstability("exponent bounds must be non-increasing in rate")


# ---------------------------------------------------------------------------
# Batched objective evaluations over priors.


def _renyi_value_batch(priors: np.ndarray, powers: np.ndarray, alpha: float) -> np.ndarray:
    return mi_values_from_powers(powers, priors, alpha)


def _renyi_value_grad_batch(
    priors: np.ndarray, powers: np.ndarray, alpha: float
) -> tuple[np.ndarray, np.ndarray]:
    priors = np.atleast_2d(priors)
    avg = np.einsum("km,mij->kij", priors, powers)
    lam, vec = np.linalg.eigh(avg)
    lam = np.clip(lam, 0.0, None)
    total = (lam ** (1.0 / alpha)).sum(axis=-1)
    vals = alpha / (alpha - 1.0) * np.log(total) / LN_BASE
    mu = lam ** ((1.0 - alpha) / alpha)  # exponent > 0 for alpha < 1, so 0 -> 0
    traces = np.einsum("kai,xab,kbi,ki->kx", vec.conj(), powers, vec, mu).real
    grads = traces / ((alpha - 1.0) * LN_BASE * total[:, None])
    return vals, grads


def _holevo_batches(channel: CQChannel):
    outputs = channel.outputs
    letter_entropy = np.asarray([von_neumann_entropy(rho) for rho in outputs])

    def value(priors: np.ndarray) -> np.ndarray:
        priors = np.atleast_2d(priors)
        avg = np.einsum("km,mij->kij", priors, outputs)
        lam = np.clip(np.linalg.eigvalsh(avg), 0.0, None)
        plogp = np.where(lam > 0, lam * np.log(np.maximum(lam, 1e-300)), 0.0)
        mix = -plogp.sum(axis=-1) / LN_BASE
        return mix - priors @ letter_entropy

    def value_grad(priors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        priors = np.atleast_2d(priors)
        avg = np.einsum("km,mij->kij", priors, outputs)
        lam, vec = np.linalg.eigh(avg)
        lam = np.clip(lam, 0.0, None)
        plogp = np.where(lam > 0, lam * np.log(np.maximum(lam, 1e-300)), 0.0)
        mix = -plogp.sum(axis=-1) / LN_BASE
        vals = mix - priors @ letter_entropy
        loglam = np.where(lam > 0, np.log(np.maximum(lam, 1e-300)) / LN_BASE, 0.0)
        traces = np.einsum("kai,xab,kbi,ki->kx", vec.conj(), outputs, vec, loglam).real
        grads = -traces - 1.0 / LN_BASE - letter_entropy[None, :]
        return vals, grads

    return value, value_grad


def _report(result: SimplexMaximum) -> OptimizationReport:
    return OptimizationReport(
        value=result.value,
        prior=result.point,
        iterations=result.iterations,
        converged=result.converged,
        multistart_count=result.start_count,
    )


def holevo_capacity(
    channel: CQChannel, config: RunConfig = DEFAULT_CONFIG, *, warm_starts=()
) -> OptimizationReport:
    """Classical capacity: maximize the Holevo quantity over input priors."""
    if channel.size > config.max_opt_alphabet:
        raise TooLarge(f"alphabet {channel.size} exceeds optimization cap {config.max_opt_alphabet}")
    value, value_grad = _holevo_batches(channel)
    result = maximize_on_simplex(
        value,
        value_grad,
        channel.size,
        config,
        seed_key=(config.seed, 101, channel.size),
        warm_starts=warm_starts,
    )
    return _report(result)


def renyi_mi_channel(
    channel: CQChannel, alpha: float, config: RunConfig = DEFAULT_CONFIG, *, warm_starts=()
) -> OptimizationReport:
    """I_alpha(N): maximize the channel Renyi information over priors.

    Requires alpha in (0, 1]; alpha = 1 dispatches to the capacity
    maximization of the Holevo quantity.
    """
    alpha = check_alpha(alpha, hi=1.0)
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if alpha == 1.0:
        return holevo_capacity(channel, config, warm_starts=warm_starts)
    if channel.size > config.max_opt_alphabet:
        raise TooLarge(f"alphabet {channel.size} exceeds optimization cap {config.max_opt_alphabet}")
    powers = letter_powers(channel.outputs, alpha)
    result = maximize_on_simplex(
        lambda priors: _renyi_value_batch(priors, powers, alpha),
        lambda priors: _renyi_value_grad_batch(priors, powers, alpha),
        channel.size,
        config,
        seed_key=(config.seed, 202, channel.size),
        warm_starts=warm_starts,
    )
    return _report(result)


# ---------------------------------------------------------------------------
# Alpha sweeps.


def _golden_max(f, lo: float, hi: float, tol: float, max_iter: int = 200):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while (b - a) > tol and it < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        it += 1
    if fc >= fd:
        return c, fc
    return d, fd


class ChannelAnalysis:
    """Session object caching the inner prior optimizations of one channel.

    All methods are deterministic for a fixed (channel, config): warm
    starts for off-grid alpha values are taken from the fixed alpha grids
    only, never from other refinement results, so outcomes do not depend
    on evaluation order.
    """

    def __init__(self, channel: CQChannel, config: RunConfig | None = None):
        self.channel = channel
        self.config = config or DEFAULT_CONFIG
        self._mi_cache: dict[float, OptimizationReport] = {}
        self._grids: dict[str, tuple[np.ndarray, list[OptimizationReport]]] = {}
        self._critical: float | None = None
        self._lock = threading.Lock()

    # -- inner optimizations -------------------------------------------------

    def _alpha_range(self, kind: str) -> tuple[float, float]:
        cfg = self.config
        achievability = (cfg.achievability_alpha_min, 1.0)
        sphere = (cfg.sphere_packing_alpha_min, 1.0)
        if cfg.use_printed_alpha_ranges:
            lower_range, upper_range = sphere, achievability
        else:
            lower_range, upper_range = achievability, sphere
        return lower_range if kind == "lower" else upper_range

    def _grid(self, kind: str) -> tuple[np.ndarray, list[OptimizationReport]]:
        with self._lock:
            cached = self._grids.get(kind)
            if cached is not None:
                return cached
            lo, hi = self._alpha_range(kind)
            alphas = np.linspace(lo, hi, self.config.alpha_grid_points)
            reports: list[OptimizationReport] = []
            warm: tuple = ()
            for alpha in alphas:
                rep = self._mi_point(float(alpha), warm_starts=warm)
                reports.append(rep)
                warm = (rep.prior,)
            self._grids[kind] = (alphas, reports)
            return self._grids[kind]

    def _mi_point(self, alpha: float, warm_starts=()) -> OptimizationReport:
        key = float(alpha)
        rep = self._mi_cache.get(key)
        if rep is None:
            rep = renyi_mi_channel(self.channel, key, self.config, warm_starts=warm_starts)
            self._mi_cache[key] = rep
        return rep

    def _grid_warm(self, kind: str, alpha: float) -> tuple:
        alphas, reports = self._grid(kind)
        order = np.argsort(np.abs(alphas - alpha))[:2]
        return tuple(reports[i].prior for i in order)

    def mutual_info(self, alpha: float) -> OptimizationReport:
        """Cached I_alpha(N) report (alpha = 1 gives the capacity report)."""
        return self._mi_point(float(alpha))

    def capacity(self) -> OptimizationReport:
        return self._mi_point(1.0)

    # -- exponent machinery ---------------------------------------------------

    def exponent_objective(self, alpha: float, r: float) -> float:
        """((1-a)/a) * (I_a(N) - r); zero at alpha = 1 by the prefactor."""
        alpha = check_alpha(alpha, hi=1.0)
        if alpha == 1.0:
            return 0.0
        mi = self._mi_point(alpha, warm_starts=self._grid_warm("lower", alpha)).value
        return (1.0 - alpha) / alpha * (mi - r)

    def _objective_on(self, kind: str, alpha: float, r: float) -> float:
        if alpha >= 1.0:
            return 0.0
        mi = self._mi_point(alpha, warm_starts=self._grid_warm(kind, alpha)).value
        return (1.0 - alpha) / alpha * (mi - r)

    def _bound(self, kind: str, r: float) -> BoundResult:
        lo, hi = self._alpha_range(kind)
        alphas, reports = self._grid(kind)
        mis = np.asarray([rep.value for rep in reports])
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(alphas >= 1.0, 0.0, (1.0 - alphas) / alphas * (mis - r))
        best = int(np.argmax(vals))
        a_lo = float(alphas[max(best - 1, 0)])
        a_hi = float(alphas[min(best + 1, len(alphas) - 1)])
        alpha_star, val_star = _golden_max(
            lambda a: self._objective_on(kind, a, r), a_lo, a_hi, self.config.alpha_tol
        )
        if vals[best] > val_star:
            alpha_star, val_star = float(alphas[best]), float(vals[best])
        saturated = (
            math.isclose(lo, self.config.sphere_packing_alpha_min)
            and alpha_star <= lo + max(self.config.alpha_tol * 10, 1e-9)
        )
        return BoundResult(value=float(val_star), alpha=float(alpha_star), saturated=saturated)

    def lower_bound(self, r: float) -> BoundResult:
        """Achievability (random-coding style) exponent bound at rate r."""
        if r < 0:
            raise ValueError("rate must be nonnegative")
        return self._bound("lower", r)

    def upper_bound(self, r: float) -> BoundResult:
        """Sphere-packing exponent bound at rate r."""
        if r <= 0:
            raise ValueError("rate must be positive")
        return self._bound("upper", r)

    def critical_rate(self) -> float:
        """d/ds [ s * I_{1/(1+s)}(N) ] at s = 1, by verified central differences."""
        if self._critical is None:
            h = self.config.fd_step

            def g(s: float) -> float:
                alpha = 1.0 / (1.0 + s)
                warm = self._grid_warm("lower", alpha)
                return s * self._mi_point(alpha, warm_starts=warm).value

            coarse = (g(1.0 + h) - g(1.0 - h)) / (2.0 * h)
            fine = (g(1.0 + h / 2.0) - g(1.0 - h / 2.0)) / h
            if abs(coarse - fine) > self.config.richardson_tol:
                raise NumericalInstability(
                    f"critical-rate difference quotients disagree: {coarse} vs {fine}"
                )
            self._critical = float(fine)
        return self._critical

    def reliability(self, r: float) -> ReliabilityResult:
        """Exact exponent for r >= r_c, bounding interval below r_c."""
        if r <= 0:
            raise ValueError("rate must be positive")
        c = self.capacity().value
        if r >= c:
            raise RateAboveCapacity(f"rate {r} is not below capacity {c}")
        low = self.lower_bound(r)
        up = self.upper_bound(r)
        if r >= self.critical_rate() - 1e-9:
            if abs(low.value - up.value) > 1e-7:
                raise NumericalInstability(
                    f"bounds differ above the critical rate: {low.value} vs {up.value}"
                )
            return ReliabilityResult(kind="exact", lower=low.value, upper=low.value)
        return ReliabilityResult(kind="interval", lower=low.value, upper=up.value)

    def curve(self, rates) -> ExponentCurve:
        """Exponent bounds on a strictly increasing rate grid inside (0, C)."""
        rates = np.asarray(rates, dtype=float)
        if rates.ndim != 1 or rates.size == 0:
            raise InvalidGrid("rate grid must be a nonempty vector")
        if np.any(np.diff(rates) <= 0):
            raise InvalidGrid("rate grid must be strictly increasing")
        c = self.capacity().value
        if rates[0] <= 0 or rates[-1] >= c:
            raise InvalidGrid(f"rates must lie strictly inside (0, {c:.6g})")
        rc = self.critical_rate()
        # Materialize both alpha grids before any parallel row work.
        self._grid("lower")
        self._grid("upper")

        def row(r: float) -> ExponentRow:
            low = self.lower_bound(r)
            up = self.upper_bound(r)
            equal = r >= rc - 1e-9
            if equal:
                if abs(low.value - up.value) > 1e-7:
                    raise NumericalInstability(
                        f"bounds differ above the critical rate at r={r}"
                    )
                return ExponentRow(
                    rate=float(r), lower=low.value, upper=low.value, equal=True,
                    alpha_lower=low.alpha, alpha_upper=up.alpha,
                    upper_saturated=up.saturated,
                )
            return ExponentRow(
                rate=float(r), lower=low.value, upper=up.value, equal=False,
                alpha_lower=low.alpha, alpha_upper=up.alpha,
                upper_saturated=up.saturated,
            )

        workers = min(worker_count(), len(rates))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(row, rates))
        else:
            rows = [row(r) for r in rates]
        return ExponentCurve(rows=tuple(rows), critical_rate=rc, capacity=c)


# ---------------------------------------------------------------------------
# Type-restricted channel information.


def constant_composition_mi(
    channel: CQChannel, t: TypeClass, alpha: float, config: RunConfig = DEFAULT_CONFIG
) -> float:
    """Per-use Renyi information of the n-fold channel under the uniform
    distribution over the type class of ``t``.

    Evaluates (a/(a-1)) (1/n) log2 tr[(mean over T_n^t of rho_xn^a)^(1/a)].
    """
    alpha = check_alpha(alpha, allow_one=False)
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if t.alphabet_size != channel.size:
        raise InvalidGrid(f"type alphabet {t.alphabet_size} != channel alphabet {channel.size}")
    n = t.n
    full_dim = channel.dim ** n
    if full_dim > config.max_sim_dim:
        raise TooLarge(f"dimension {full_dim} exceeds cap {config.max_sim_dim}")
    powers = letter_powers(channel.outputs, alpha)
    avg = np.zeros((full_dim, full_dim), dtype=complex)
    count = 0
    for seq in enumerate_sequences(t, cap=config.max_type_count):
        avg += tensor_all([powers[x] for x in seq])
        count += 1
    avg /= count
    total = float(np.trace(mat_power(avg, 1.0 / alpha)).real)
    return alpha / (alpha - 1.0) / n * math.log(total) / LN_BASE


def best_type(
    channel: CQChannel, n: int, alpha: float, config: RunConfig = DEFAULT_CONFIG
) -> tuple[TypeClass, float]:
    """Type of blocklength n maximizing the constant-composition information."""
    best_t: TypeClass | None = None
    best_v = -math.inf
    for t in enumerate_types(n, channel.size, cap=config.max_type_count):
        v = constant_composition_mi(channel, t, alpha, config)
        if v > best_v:
            best_t, best_v = t, v
    assert best_t is not None
    return best_t, best_v


def best_type_up_to(
    channel: CQChannel, n_max: int, alpha: float, config: RunConfig = DEFAULT_CONFIG
) -> list[tuple[int, TypeClass, float]]:
    """Running best over blocklengths m <= n, one row per n in 1..n_max.

    The exact per-blocklength maximum oscillates with parity (a balanced
    composition may not exist at odd n), so reports expose the best value
    achieved by any blocklength up to n; this sequence is non-decreasing
    and still converges to I_alpha(N) from below.
    """
    rows: list[tuple[int, TypeClass, float]] = []
    best_t: TypeClass | None = None
    best_v = -math.inf
    for n in range(1, n_max + 1):
        t, v = best_type(channel, n, alpha, config)
        if v > best_v:
            best_t, best_v = t, v
        rows.append((n, best_t, best_v))
    return rows


# ---------------------------------------------------------------------------
# One-shot wrappers around a throwaway session.


def exponent_objective(
    channel: CQChannel, alpha: float, r: float, config: RunConfig = DEFAULT_CONFIG
) -> float:
    return ChannelAnalysis(channel, config).exponent_objective(alpha, r)


def error_exponent_lower(
    channel: CQChannel, r: float, config: RunConfig = DEFAULT_CONFIG
) -> BoundResult:
    return ChannelAnalysis(channel, config).lower_bound(r)


def sphere_packing_upper(
    channel: CQChannel, r: float, config: RunConfig = DEFAULT_CONFIG
) -> BoundResult:
    return ChannelAnalysis(channel, config).upper_bound(r)


def critical_rate(channel: CQChannel, config: RunConfig = DEFAULT_CONFIG) -> float:
    return ChannelAnalysis(channel, config).critical_rate()


def reliability_function(
    channel: CQChannel, r: float, config: RunConfig = DEFAULT_CONFIG
) -> ReliabilityResult:
    return ChannelAnalysis(channel, config).reliability(r)


def exponent_curve(channel: CQChannel, rates, config: RunConfig = DEFAULT_CONFIG) -> ExponentCurve:
    return ChannelAnalysis(channel, config).curve(rates)
