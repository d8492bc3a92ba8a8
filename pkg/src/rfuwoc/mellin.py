"""Fox H-functions by direct quadrature of their Mellin-Barnes integrals.

Univariate functions follow the usual convention

    H^{m,n}_{p,q}[z] = 1/(2 pi i) \\int_L  prod_{j<=m} G(b_j + B_j s)
                       prod_{j<=n} G(1 - a_j - A_j s)
                       / (prod_{j>m} G(1 - b_j - B_j s) prod_{j>n} G(a_j + A_j s))
                       z^{-s} ds

and the bivariate ones the (s, t) convention with ``x**s * y**t`` and a joint
block ``G(1 - a_j + alpha_j s + A_j t)`` coupling the two contours.  Every
gamma product is summed in log space and exponentiated once per node.  Both
contours are straight vertical lines; the line integrals are truncated where
the integrand has decayed below the tolerance and integrated with the
adaptive Gauss-Kronrod rule in :mod:`rfuwoc.quadrature`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import special
from scipy.optimize import linprog, minimize, minimize_scalar

from .errors import ConvergenceError, DomainError, NoContourError, PoleError
from .quadrature import adaptive_gk15

DEFAULT_REL_TOL = 1e-9
DEFAULT_BIVARIATE_REL_TOL = 1e-7
DEFAULT_MAX_NODES = 200_000
_MAX_HALF_HEIGHT = 2.0 ** 14
# Truncated tails must sit this far below the tolerance-scaled peak.
_TAIL_FACTOR = 1e-3


# --------------------------------------------------------------------------
# scalar special functions


def log_gamma_complex(z):
    """Principal branch of log Gamma(z) for complex (or real) ``z``.

    Accepts scalars or arrays.  Raises :class:`PoleError` if any element is a
    non-positive integer.
    """
    z = np.asarray(z, dtype=complex)
    poles = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(poles):
        raise PoleError(f"log_gamma_complex: pole at {z[poles].ravel()[0].real:g}")
    out = special.loggamma(z)
    return out[()] if out.ndim == 0 else out


def exp_integral_Ei(x: float) -> float:
    """Exponential integral Ei(x) = -PV int_{-x}^inf e^{-t}/t dt, x != 0."""
    x = float(x)
    if x == 0.0 or not math.isfinite(x):
        raise DomainError(f"Ei is undefined at x={x}")
    return float(special.expi(x))


def exp_integral_En(n: float, x: float) -> float:
    """Generalised exponential integral E_n(x) = int_1^inf e^{-x t} t^{-n} dt.

    Integer orders go through the Cephes routine; real orders ``n >= 0`` use
    a continued fraction for ``x >= 1`` and, below that, an upward recurrence
    seeded from the fractional order in (0, 1), which is stable for small x.
    """
    x = float(x)
    n = float(n)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"E_n requires x > 0, got {x}")
    if n < 0:
        raise DomainError(f"E_n requires n >= 0, got {n}")
    if n == round(n):
        if n == 0:
            return math.exp(-x) / x
        return float(special.expn(int(n), x))
    if x >= 1.0:
        return _en_continued_fraction(n, x)
    q = n - math.floor(n)
    # E_q(x) = x^{q-1} Gamma(1-q, x) with 1-q in (0, 1)
    value = x ** (q - 1.0) * special.gammaincc(1.0 - q, x) * special.gamma(1.0 - q)
    order = q
    while order + 0.5 < n:
        value = (math.exp(-x) - x * value) / order
        order += 1.0
    return float(value)


def _en_continued_fraction(n, x):
    tiny = 1e-300
    b = x + n
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (n - 1.0 + i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(-x)
    raise ConvergenceError(f"E_{n}({x}) continued fraction did not converge")


# --------------------------------------------------------------------------
# parameter types


@dataclass(frozen=True)
class GammaTerm:
    """One ``(shift, scale)`` pair of an H-function parameter list."""

    shift: float
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"GammaTerm scale must be positive, got {self.scale}")


def _terms(pairs) -> tuple[GammaTerm, ...]:
    return tuple(p if isinstance(p, GammaTerm) else GammaTerm(*p) for p in pairs)


@dataclass(frozen=True)
class FoxHSpec:
    """Orders and parameters of a univariate H-function.

    ``upper`` holds the ``(a_j, A_j)`` and ``lower`` the ``(b_j, B_j)``;
    ``p`` and ``q`` are their lengths.
    """

    m: int
    n: int
    upper: tuple[GammaTerm, ...] = ()
    lower: tuple[GammaTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", _terms(self.upper))
        object.__setattr__(self, "lower", _terms(self.lower))
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValueError(
                f"invalid orders m={self.m}, n={self.n}, p={self.p}, q={self.q}")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @classmethod
    def build(cls, m, n, upper=(), lower=()):
        return cls(m, n, _terms(upper), _terms(lower))

    def linear_gammas(self):
        """Numerator and denominator gammas as ``(c, A)`` with argument c + A s."""
        num, den = [], []
        for j, t in enumerate(self.lower):
            if j < self.m:
                num.append((t.shift, t.scale))
            else:
                den.append((1.0 - t.shift, -t.scale))
        for j, t in enumerate(self.upper):
            if j < self.n:
                num.append((1.0 - t.shift, -t.scale))
            else:
                den.append((t.shift, t.scale))
        return num, den

    def separating_interval(self) -> tuple[float, float]:
        """Open interval of abscissae that separate the two pole families."""
        lo, hi = -math.inf, math.inf
        for c, a in self.linear_gammas()[0]:
            if a > 0:
                lo = max(lo, -c / a)
            else:
                hi = min(hi, c / -a)
        return lo, hi


@dataclass(frozen=True)
class JointTerm:
    """``(shift; scale1, scale2)`` entry of the joint block of a bivariate H."""

    shift: float
    scale1: float
    scale2: float

    def __post_init__(self):
        if self.scale1 < 0 or self.scale2 < 0 or (self.scale1 == 0 and self.scale2 == 0):
            raise ValueError(f"invalid joint-term scales ({self.scale1}, {self.scale2})")


@dataclass(frozen=True)
class BivariateFoxHSpec:
    """Bivariate H-function H^{0,n1: m2,n2; m3,n3}_{p1,q1: p2,q2; p3,q3}.

    ``joint_upper`` are the ``(a_j; alpha_j, A_j)`` (the first ``n1`` in the
    numerator), ``joint_lower`` the ``(b_j; beta_j, B_j)``.  ``kernel1`` and
    ``kernel2`` carry the ``(c, gamma)/(d, delta)`` and ``(e, E)/(f, F)``
    lists with their own ``m``/``n`` orders; they enter with the sign of the
    integration variable reversed relative to a univariate H, so that a spec
    with an empty joint block is the product of the two univariate functions.
    """

    n1: int
    joint_upper: tuple[JointTerm, ...]
    joint_lower: tuple[JointTerm, ...]
    kernel1: FoxHSpec
    kernel2: FoxHSpec

    def __post_init__(self):
        up = tuple(j if isinstance(j, JointTerm) else JointTerm(*j) for j in self.joint_upper)
        lo = tuple(j if isinstance(j, JointTerm) else JointTerm(*j) for j in self.joint_lower)
        object.__setattr__(self, "joint_upper", up)
        object.__setattr__(self, "joint_lower", lo)
        if not 0 <= self.n1 <= len(up):
            raise ValueError(f"invalid joint order n1={self.n1}")

    def linear_gammas(self):
        """Gammas with argument ``c + A1 s + A2 t`` as ``(c, A1, A2)`` rows."""
        num, den = [], []
        for j, t in enumerate(self.joint_upper):
            if j < self.n1:
                num.append((1.0 - t.shift, t.scale1, t.scale2))
            else:
                den.append((t.shift, -t.scale1, -t.scale2))
        for t in self.joint_lower:
            den.append((1.0 - t.shift, t.scale1, t.scale2))
        for kernel, axis in ((self.kernel1, 0), (self.kernel2, 1)):
            k_num, k_den = kernel.linear_gammas()
            for rows, target in ((k_num, num), (k_den, den)):
                for c, a in rows:
                    coeff = [0.0, 0.0]
                    coeff[axis] = -a
                    target.append((c, coeff[0], coeff[1]))
        return num, den


@dataclass(frozen=True)
class ContourSpec:
    """Vertical contour ``Re(s) = sigma`` truncated to ``|Im(s)| <= half_height``."""

    sigma: float
    half_height: float
    rel_tol: float = DEFAULT_REL_TOL
    max_nodes: int = DEFAULT_MAX_NODES

    def __post_init__(self):
        if not (0 < self.rel_tol < 1):
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if not self.half_height > 0:
            raise ValueError("half_height must be positive")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")


@dataclass
class MellinResult:
    """Value of an H-function together with quadrature diagnostics."""

    value: float
    error: float
    imag: float
    nodes: int
    contours: tuple[ContourSpec, ...] = field(default_factory=tuple)
    # rounding floor of the quadrature relative to |value|
    cancellation: float = 0.0


# --------------------------------------------------------------------------
# log-space kernels


class _LinearKernel:
    """log of prod G(c + A.v) / prod G(c' + A'.v) for v in C^d."""

    def __init__(self, num, den):
        num = np.asarray(num, dtype=float).reshape(-1, 1 + self._dim(num, den))
        den = np.asarray(den, dtype=float).reshape(-1, num.shape[1])
        self.num_c, self.num_a = num[:, 0], num[:, 1:]
        self.den_c, self.den_a = den[:, 0], den[:, 1:]

    @staticmethod
    def _dim(num, den):
        rows = list(num) + list(den)
        return len(rows[0]) - 1 if rows else 1

    def log(self, *v):
        """Sum of log-gammas; ``v`` broadcast against each other."""
        v = np.broadcast_arrays(*[np.asarray(x, dtype=complex) for x in v])
        out = np.zeros(v[0].shape, dtype=complex)
        for c, a in zip(self.num_c, self.num_a):
            out += special.loggamma(c + sum(ai * vi for ai, vi in zip(a, v)))
        for c, a in zip(self.den_c, self.den_a):
            out -= special.loggamma(c + sum(ai * vi for ai, vi in zip(a, v)))
        return out


def _univariate_kernel(spec: FoxHSpec) -> _LinearKernel:
    num, den = spec.linear_gammas()
    return _LinearKernel(num, den)


# --------------------------------------------------------------------------
# univariate


def validate_fox_h(spec: FoxHSpec) -> tuple[float, float]:
    """Return the separating interval or raise :class:`NoContourError`."""
    lo, hi = spec.separating_interval()
    if not lo < hi:
        raise NoContourError(
            f"pole families overlap: left poles reach {lo:g}, right poles start at {hi:g}")
    return lo, hi


def _default_sigma(lo, hi):
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + 1.0
    if math.isfinite(hi):
        return hi - 1.0
    return 0.0


def _grow_half_height(logmag, start, threshold_rel):
    """Double ``T`` until ``logmag(+-T)`` sits below peak + log(threshold_rel).

    ``logmag`` maps an array of ordinates to log-magnitudes.  Returns
    ``(T, log_peak)``.
    """
    T = float(start)
    log_thr = math.log(threshold_rel)
    while True:
        y = np.linspace(-T, T, int(min(4097, 16 * T + 1)) | 1)
        lm = logmag(y)
        peak = float(np.max(lm))
        if max(lm[0], lm[-1]) < peak + log_thr:
            return T, peak
        if T >= _MAX_HALF_HEIGHT:
            raise ConvergenceError(
                "integrand does not decay along the contour", axis="s")
        T *= 2.0


def choose_contour(spec: FoxHSpec, z: float, *, rel_tol: float = DEFAULT_REL_TOL,
                   max_nodes: int = DEFAULT_MAX_NODES, sigma: float | None = None) -> ContourSpec:
    """Pick the abscissa and truncation height for ``H[z]``.

    The abscissa defaults to the midpoint of the separating interval, or a
    unit offset from its finite end when the other end is unbounded.
    """
    lo, hi = validate_fox_h(spec)
    if sigma is None:
        sigma = _default_sigma(lo, hi)
    elif not lo < sigma < hi:
        raise NoContourError(f"sigma={sigma} is outside the separating interval ({lo}, {hi})")
    if not z > 0:
        raise DomainError(f"H-function argument must be positive, got {z}")
    kernel = _univariate_kernel(spec)
    log_z = math.log(z)

    def logmag(y):
        s = sigma + 1j * y
        return np.real(kernel.log(s) - s * log_z)

    T, _ = _grow_half_height(logmag, 4.0, _TAIL_FACTOR * rel_tol)
    return ContourSpec(float(sigma), T, rel_tol, max_nodes)


def saddle_sigma(spec: FoxHSpec, z: float) -> float:
    """Abscissa minimising the real-axis modulus of the numerator gammas times z^-s."""
    lo, hi = validate_fox_h(spec)
    num, _ = spec.linear_gammas()
    rows = np.asarray(num, dtype=float).reshape(-1, 2)
    log_z = math.log(z)

    def objective(sigma):
        return float(np.sum(special.gammaln(rows[:, 0] + rows[:, 1] * sigma)) - sigma * log_z)

    # keep a little distance from the nearest poles; unbounded sides get a wide box
    width = hi - lo if math.isfinite(hi - lo) else 2.0
    a = lo + 0.02 * min(width, 1.0) if math.isfinite(lo) else hi - 1e5
    b = hi - 0.02 * min(width, 1.0) if math.isfinite(hi) else lo + 1e5
    return float(minimize_scalar(objective, bounds=(a, b), method="bounded",
                                 options={"xatol": 1e-6}).x)


def fox_h(spec: FoxHSpec, z: float, contour: ContourSpec | None = None, *,
          rel_tol: float | None = None) -> MellinResult:
    """Evaluate ``H[z]`` and return the value with diagnostics.

    Without an explicit contour the default abscissa is tried first; if
    its result is dominated by cancellation (the rounding floor of the
    quadrature exceeds the requested accuracy) the evaluation is repeated at
    :func:`saddle_sigma` and the less-cancelling result is returned.
    """
    if contour is not None:
        return _fox_h_on(spec, z, contour)
    tol = rel_tol or DEFAULT_REL_TOL
    first = _fox_h_on(spec, z, choose_contour(spec, z, rel_tol=tol))
    if first.cancellation <= tol:
        return first
    try:
        second = _fox_h_on(spec, z, choose_contour(spec, z, rel_tol=tol,
                                                   sigma=saddle_sigma(spec, z)))
    except ConvergenceError:
        return first
    return second if second.cancellation < first.cancellation else first


def _fox_h_on(spec: FoxHSpec, z: float, contour: ContourSpec) -> MellinResult:
    lo, hi = validate_fox_h(spec)
    if not lo < contour.sigma < hi:
        raise NoContourError(f"sigma={contour.sigma} does not separate the poles ({lo}, {hi})")
    if not z > 0:
        raise DomainError(f"H-function argument must be positive, got {z}")
    kernel = _univariate_kernel(spec)
    log_z = math.log(z)
    sigma = contour.sigma

    def logf(y):
        s = sigma + 1j * y
        return kernel.log(s) - s * log_z

    # a posteriori check of the truncation height
    T = contour.half_height
    ends = np.real(logf(np.array([-T, T])))
    probe = np.real(logf(np.linspace(-T, T, 513)))
    if np.max(ends) >= np.max(probe) + math.log(_TAIL_FACTOR * contour.rel_tol):
        T, _ = _grow_half_height(lambda y: np.real(logf(y)), T, _TAIL_FACTOR * contour.rel_tol)
        contour = replace(contour, half_height=T)

    n_panels = int(max(8, math.ceil(T)))
    res = adaptive_gk15(lambda y: np.exp(logf(y)), np.linspace(-T, T, n_panels + 1),
                        rel_tol=contour.rel_tol, max_nodes=contour.max_nodes, axis="s")
    value = complex(res.value) / (2.0 * math.pi)
    err = float(res.error) / (2.0 * math.pi)
    scale = max(abs(value.real), 50 * np.finfo(float).eps * float(res.l1) / (2 * math.pi))
    if abs(value.imag) > max(contour.rel_tol * scale, err):
        raise ConvergenceError(
            f"non-negligible imaginary part {value.imag:.3e} (real {value.real:.3e})", axis="s")
    out = MellinResult(value.real, err, value.imag, res.nodes, (contour,))
    out.cancellation = 100 * np.finfo(float).eps * float(res.l1) / (2 * math.pi) / max(
        abs(value.real), np.finfo(float).tiny)
    return out


def eval_fox_h(spec: FoxHSpec, z: float, contour: ContourSpec | None = None, *,
               rel_tol: float | None = None) -> float:
    """Real value of the univariate H-function ``H[z]`` for ``z > 0``."""
    return fox_h(spec, z, contour, rel_tol=rel_tol).value


# --------------------------------------------------------------------------
# bivariate


def choose_bivariate_contours(spec: BivariateFoxHSpec, z1: float, z2: float, *,
                              rel_tol: float = DEFAULT_BIVARIATE_REL_TOL,
                              max_nodes: int = DEFAULT_MAX_NODES,
                              margin_cap: float = 0.5) -> tuple[ContourSpec, ContourSpec]:
    """Choose abscissae ``(sigma_s, sigma_t)`` for the double contour.

    Every numerator gamma argument must have positive real part on the
    contour.  A first linear program maximises the smallest such real part
    (capped at ``margin_cap``); a second keeps 80 % of that margin while
    pulling the abscissae as close to the origin as possible.  The result
    then seeds a saddle-point refinement (:func:`_saddle_abscissae`).
    """
    for k in (spec.kernel1, spec.kernel2):
        validate_fox_h(k)
    if not (z1 > 0 and z2 > 0):
        raise DomainError(f"bivariate H arguments must be positive, got {z1}, {z2}")
    num, _ = spec.linear_gammas()
    rows = np.asarray(num, dtype=float).reshape(-1, 3)
    box = 50.0
    # variables: sigma1, sigma2, margin;  c + a.sigma >= margin
    a_ub = np.column_stack([-rows[:, 1], -rows[:, 2], np.ones(len(rows))])
    b_ub = rows[:, 0]
    res = linprog(c=[0, 0, -1], A_ub=a_ub, b_ub=b_ub,
                  bounds=[(-box, box), (-box, box), (None, margin_cap)], method="highs")
    if res.status != 0 or res.x[2] <= 1e-9:
        raise NoContourError("no pair of vertical contours separates the bivariate poles")
    margin = 0.8 * res.x[2]
    # variables: sigma1, sigma2, |sigma1|, |sigma2|
    a2 = [np.column_stack([-rows[:, 1], -rows[:, 2], np.zeros((len(rows), 2))])]
    b2 = [rows[:, 0] - margin]
    a2.append(np.array([[1, 0, -1, 0], [-1, 0, -1, 0], [0, 1, 0, -1], [0, -1, 0, -1]], float))
    b2.append(np.zeros(4))
    res2 = linprog(c=[0, 0, 1, 1], A_ub=np.vstack(a2), b_ub=np.concatenate(b2),
                   bounds=[(-box, box), (-box, box), (0, None), (0, None)], method="highs")
    sig = res2.x[:2] if res2.status == 0 else res.x[:2]
    s1, s2 = _saddle_abscissae(rows, math.log(z1), math.log(z2), sig,
                               min(0.02, 0.5 * res.x[2]), box)
    logf = _bivariate_logf(spec, z1, z2, s1, s2)
    U, V, _ = _bivariate_extent(logf, _TAIL_FACTOR * rel_tol)
    return (ContourSpec(s1, U, rel_tol, max_nodes), ContourSpec(s2, V, rel_tol, max_nodes))


def _saddle_abscissae(rows, log_z1, log_z2, start, min_slack, box):
    """Move the abscissae towards the saddle of the real-axis integrand.

    The objective is the log of the numerator gammas times the argument
    powers on the real slice, which bounds the integrand modulus on the
    contour.  Minimising it keeps the peak close to the size of the result,
    so the quadrature does not have to resolve a large cancellation (for
    instance when one argument is huge).  Pole constraints stay linear.
    """
    c, a = rows[:, 0], rows[:, 1:]
    logs = np.array([log_z1, log_z2])

    def objective(x):
        return float(np.sum(special.gammaln(c + a @ x)) + logs @ x)

    def gradient(x):
        return a.T @ special.digamma(c + a @ x) + logs

    start = np.asarray(start, dtype=float)
    if np.any(c + a @ start < min_slack):
        return float(start[0]), float(start[1])
    res = minimize(objective, start, jac=gradient, method="SLSQP",
                   bounds=[(-box, box), (-box, box)],
                   constraints=[{"type": "ineq", "fun": lambda x: c + a @ x - min_slack,
                                 "jac": lambda x: a}],
                   options={"maxiter": 200, "ftol": 1e-10})
    best = res.x if res.success and objective(res.x) <= objective(start) else start
    if np.any(c + a @ best < 0.5 * min_slack):
        best = start
    return float(best[0]), float(best[1])


def _bivariate_logf(spec, z1, z2, s0, t0):
    num, den = spec.linear_gammas()
    rows_num = np.asarray(num, dtype=float).reshape(-1, 3)
    rows_den = np.asarray(den, dtype=float).reshape(-1, 3)

    def split(rows):
        s_only = rows[(rows[:, 2] == 0)]
        t_only = rows[(rows[:, 1] == 0) & (rows[:, 2] != 0)]
        joint = rows[(rows[:, 1] != 0) & (rows[:, 2] != 0)]
        return s_only, t_only, joint

    ns, nt, nj = split(rows_num)
    ds, dt, dj = split(rows_den)
    ks = _LinearKernel(np.column_stack([ns[:, 0], ns[:, 1]]), np.column_stack([ds[:, 0], ds[:, 1]]))
    kt = _LinearKernel(np.column_stack([nt[:, 0], nt[:, 2]]), np.column_stack([dt[:, 0], dt[:, 2]]))
    kj = _LinearKernel(nj, dj)
    lx, ly = math.log(z1), math.log(z2)

    class LogF:
        def s_part(self, u):
            s = s0 + 1j * u
            return ks.log(s) + s * lx

        def t_part(self, v):
            t = t0 + 1j * v
            return kt.log(t) + t * ly

        def joint(self, u, v):
            return kj.log(s0 + 1j * u, t0 + 1j * v)

        def grid(self, u, v):
            return (self.s_part(u)[:, None] + self.t_part(v)[None, :]
                    + self.joint(u[:, None], v[None, :]))

    return LogF()


def _bivariate_extent(logf, threshold_rel, U=8.0, V=8.0):
    """Half-heights (U for s, V for t) beyond which the integrand is negligible."""
    log_thr = math.log(threshold_rel)
    while True:
        u = np.linspace(-U, U, int(min(1025, 8 * U + 1)) | 1)
        v = np.linspace(-V, V, int(min(1025, 8 * V + 1)) | 1)
        lm = np.real(logf.grid(u, v))
        peak = float(lm.max())
        u_edge = max(lm[0, :].max(), lm[-1, :].max())
        v_edge = max(lm[:, 0].max(), lm[:, -1].max())
        grow_u = u_edge >= peak + log_thr
        grow_v = v_edge >= peak + log_thr
        if not (grow_u or grow_v):
            return U, V, peak
        if max(U, V) >= _MAX_HALF_HEIGHT / 16:
            raise ConvergenceError("bivariate integrand does not decay",
                                   axis="s" if grow_u else "t")
        if grow_u:
            U *= 2.0
        if grow_v:
            V *= 2.0


def bivariate_fox_h(spec: BivariateFoxHSpec, z1: float, z2: float,
                    contours: tuple[ContourSpec, ContourSpec] | None = None, *,
                    rel_tol: float | None = None, symmetric: bool = True) -> MellinResult:
    """Evaluate the bivariate H-function with diagnostics.

    The second variable ``t`` is integrated in the outer loop; each batch of
    outer nodes is passed to one vector-valued inner integration over ``s``,
    so every outer node's inner integral is computed once.  With
    ``symmetric=True`` the conjugate symmetry of the integrand (all
    parameters real, arguments positive) restricts the outer axis to
    ``Im t >= 0``; ``symmetric=False`` integrates the full line and reports
    the imaginary residue.
    """
    if contours is None:
        contours = choose_bivariate_contours(
            spec, z1, z2, rel_tol=rel_tol or DEFAULT_BIVARIATE_REL_TOL)
    cs, ct = contours
    num, _ = spec.linear_gammas()
    rows = np.asarray(num, dtype=float).reshape(-1, 3)
    slack = rows[:, 0] + rows[:, 1] * cs.sigma + rows[:, 2] * ct.sigma
    if np.any(slack <= 0):
        raise NoContourError(
            f"contours ({cs.sigma}, {ct.sigma}) do not separate the bivariate poles")
    tol = min(cs.rel_tol, ct.rel_tol)
    logf = _bivariate_logf(spec, z1, z2, cs.sigma, ct.sigma)
    U, V, log_peak = _bivariate_extent(logf, _TAIL_FACTOR * tol, cs.half_height, ct.half_height)
    peak = math.exp(log_peak)

    # Values far below the integrand's peak are resolved to an absolute
    # accuracy tied to that peak; relative accuracy there would need a
    # deformed contour.
    outer_floor = 1e-2 * tol * peak
    inner_floor = 1e-3 * tol * peak / max(1.0, V)
    inner_nodes = [0]
    inner_err = [0.0]

    def inner(v):
        tpart = logf.t_part(v)

        def f(u):
            return np.exp(logf.s_part(u)[:, None] + tpart[None, :]
                          + logf.joint(u[:, None], v[None, :]))

        n_panels = int(max(8, math.ceil(U)))
        res = adaptive_gk15(f, np.linspace(-U, U, n_panels + 1), rel_tol=0.1 * tol,
                            abs_tol=inner_floor, max_nodes=cs.max_nodes, axis="s")
        inner_nodes[0] += res.nodes
        inner_err[0] = max(inner_err[0], float(np.max(res.error)))
        return res.value

    lower = 0.0 if symmetric else -V
    n_panels = int(max(8, math.ceil(V - lower)))
    outer = adaptive_gk15(inner, np.linspace(lower, V, n_panels + 1), rel_tol=tol,
                          abs_tol=outer_floor, max_nodes=ct.max_nodes, axis="t")
    norm = 4.0 * math.pi ** 2
    if symmetric:
        value = 2.0 * complex(outer.value).real / norm
        imag = 0.0
    else:
        value = complex(outer.value).real / norm
        imag = complex(outer.value).imag / norm
    error = (2.0 * float(outer.error) + inner_err[0] * (V - lower)) / norm
    used = (replace(cs, half_height=U), replace(ct, half_height=V))
    return MellinResult(value, error, imag, inner_nodes[0] + outer.nodes, used)


def eval_bivariate_fox_h(spec: BivariateFoxHSpec, z1: float, z2: float,
                         contours: tuple[ContourSpec, ContourSpec] | None = None, *,
                         rel_tol: float | None = None) -> float:
    """Real value of the bivariate H-function at ``(z1, z2)``."""
    return bivariate_fox_h(spec, z1, z2, contours, rel_tol=rel_tol).value


def fox_h_spec(m: int, n: int, upper: Sequence = (), lower: Sequence = ()) -> FoxHSpec:
    """Shorthand: ``fox_h_spec(1, 0, [], [(0, 1)])`` is the kernel of exp(-z)."""
    return FoxHSpec(m, n, _terms(upper), _terms(lower))
