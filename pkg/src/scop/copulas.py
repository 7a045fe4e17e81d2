"""One-parameter bivariate copula families with dependence-parameter links.

Families: independent, gaussian, student_t, clayton, gumbel, frank, joe.
Each family exposes the cdf, the log-density, Kendall-tau links in both
directions, and seeded sampling. ``cdf`` accepts the closed unit square and
returns exact boundary values; ``log_density`` requires interior points
(the margins machinery guarantees them) and clamps to [1e-12, 1-1e-12]
for numerical safety.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, ndtr, ndtri, stdtr, stdtrit

from .errors import DomainError, ValidationError

FAMILY_ORDER = ("independent", "gaussian", "student_t", "clayton", "gumbel", "frank", "joe")

_UNIT_EPS = 1e-12
_THETA_BRACKETS = {"clayton": (1e-8, 200.0), "gumbel": (1.0, 50.0), "frank": (-50.0, 50.0), "joe": (1.0, 50.0)}
_BISECT_TOL = 1e-8  # |tau(theta) - tau_target| tolerance for link inversion


# ---------------------------------------------------------------------------
# quadrature helpers
# ---------------------------------------------------------------------------

def _adaptive_simpson(f, a, b, tol=1e-10, max_depth=40):
    """Adaptive Simpson quadrature of a scalar function on [a, b]."""

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        x1l = 0.5 * (x0 + 0.5 * (x0 + x2))
        x1r = 0.5 * (0.5 * (x0 + x2) + x2)
        fl, fr = f(x1l), f(x1r)
        xm = 0.5 * (x0 + x2)
        left = simpson(f0, fl, f1, xm - x0)
        right = simpson(f1, fr, f2, x2 - xm)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        half = 0.5 * tol
        return (recurse(x0, xm, f0, fl, f1, left, half, depth + 1)
                + recurse(xm, x2, f1, fr, f2, right, half, depth + 1))

    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    whole = simpson(fa, fm, fb, b - a)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def debye1(x: float) -> float:
    """First Debye function D1(x) = (1/x) * int_0^x t/(e^t - 1) dt, x > 0."""
    if x <= 0:
        raise DomainError(f"Debye function argument must be positive, got {x}")

    def integrand(t):
        if t < 1e-8:
            return 1.0 - t / 2.0 + t * t / 12.0
        return t / np.expm1(t)

    return _adaptive_simpson(integrand, 0.0, x, tol=1e-12) / x


def _bisect_increasing(f, lo, hi, target, tol):
    """Bisection for f increasing on [lo, hi]; |f(mid) - target| <= tol."""
    flo, fhi = f(lo), f(hi)
    if not (flo - tol <= target <= fhi + tol):
        raise DomainError(
            f"target {target} outside attainable range [{flo:.6f}, {fhi:.6f}]"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm - target) <= tol:
            return mid
        if fm < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# bivariate normal and t cdfs
# ---------------------------------------------------------------------------

_GL6_W = np.array([0.1713244923791705, 0.3607615730481384, 0.4679139345726904])
_GL6_X = np.array([0.9324695142031522, 0.6612093864662647, 0.2386191860831970])
_GL12_W = np.array([0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                    0.2031674267230659, 0.2334925365383547, 0.2491470458134029])
_GL12_X = np.array([0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                    0.5873179542866171, 0.3678314989981802, 0.1252334085114692])
_GL20_W = np.array([0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                    0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                    0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                    0.1527533871307259])
_GL20_X = np.array([0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                    0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                    0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                    0.07652652113349733])


def _bvnu(dh, dk, r):
    """Genz's algorithm for the upper-quadrant bivariate normal probability
    P(X > dh, Y > dk) with correlation r; absolute error below 5e-16.

    Vectorized over dh, dk (r is scalar).
    """
    h = np.asarray(dh, dtype=float)
    k = np.asarray(dk, dtype=float)
    h, k = np.broadcast_arrays(h, k)
    h = h.astype(float).ravel()
    k = k.astype(float).ravel()
    shape = np.broadcast_shapes(np.shape(dh), np.shape(dk))
    if r == 0.0:
        p = ndtr(-h) * ndtr(-k)
        return p.reshape(shape) if shape else float(p[0])

    ar = abs(r)
    if ar < 0.3:
        w_half, x_half = _GL6_W, _GL6_X
    elif ar < 0.75:
        w_half, x_half = _GL12_W, _GL12_X
    else:
        w_half, x_half = _GL20_W, _GL20_X
    w = np.concatenate([w_half, w_half])
    x = np.concatenate([1.0 - x_half, 1.0 + x_half])
    tp = 2.0 * np.pi

    hk = h * k
    bvn = np.zeros_like(h)
    if ar < 0.925:
        hs = (h * h + k * k) / 2.0
        asr = np.arcsin(r) / 2.0
        sn = np.sin(asr * x)  # (nodes,)
        expo = (np.outer(hk, sn) - hs[:, None]) / (1.0 - sn[None, :] ** 2)
        bvn = np.exp(expo) @ w
        bvn = bvn * asr / tp + ndtr(-h) * ndtr(-k)
    else:
        if r < 0.0:
            k = -k
            hk = -hk
        if ar < 1.0:
            as_ = (1.0 - r) * (1.0 + r)
            a = np.sqrt(as_)
            bs = (h - k) ** 2
            c = (4.0 - hk) / 8.0
            d = (12.0 - hk) / 16.0
            asr0 = -(bs / as_ + hk) / 2.0
            m = asr0 > -100.0
            bvn = np.where(
                m,
                a * np.exp(np.where(m, asr0, 0.0))
                * (1.0 - c * (bs - as_) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as_ * as_ / 5.0),
                0.0,
            )
            m = -hk < 100.0
            b = np.sqrt(bs)
            sp = np.sqrt(tp) * ndtr(-b / a)
            bvn = bvn - np.where(
                m,
                np.exp(np.where(m, -hk / 2.0, 0.0)) * sp * b
                * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0),
                0.0,
            )
            aти = a / 2.0
            for sgn in (-1.0, 1.0):
                xs = (aти * (sgn * x + 1.0)) ** 2  # (nodes,)
                rs = np.sqrt(1.0 - xs)
                asr1 = -(bs[:, None] / xs[None, :] + hk[:, None]) / 2.0
                mm = asr1 > -100.0
                sp1 = 1.0 + c[:, None] * xs[None, :] * (1.0 + d[:, None] * xs[None, :])
                ep = np.exp(-hk[:, None] * (1.0 - rs[None, :]) / (2.0 * (1.0 + rs[None, :]))) / rs[None, :]
                contrib = np.where(mm, np.exp(np.where(mm, asr1, 0.0)) * (ep - sp1), 0.0)
                bvn = bvn + aти * (contrib @ w)
            bvn = -bvn / tp
        if r > 0.0:
            bvn = bvn + ndtr(-np.maximum(h, k))
        else:
            bvn = -bvn + np.maximum(0.0, ndtr(-h) - ndtr(-k))
    p = np.clip(bvn, 0.0, 1.0)
    return p.reshape(shape) if shape else float(p[0])


def bvn_cdf(x, y, rho):
    """P(X <= x, Y <= y) for standard bivariate normal with correlation rho."""
    if not -1.0 < rho < 1.0:
        raise DomainError(f"correlation must lie in (-1, 1), got {rho}")
    out = _bvnu(-np.asarray(x, float), -np.asarray(y, float), rho)
    if np.ndim(out) == 0:
        return float(out)
    return out


_BVT_NODES, _BVT_WEIGHTS = np.polynomial.legendre.leggauss(256)


def bvt_cdf(x, y, rho, nu):
    """P(T1 <= x, T2 <= y) for a bivariate Student-t with correlation rho.

    Computed by Gauss-Legendre quadrature of the exact conditional
    decomposition: given T1 = s, T2 is a located-scaled t with nu+1 df.
    """
    if not -1.0 < rho < 1.0:
        raise DomainError(f"correlation must lie in (-1, 1), got {rho}")
    if nu <= 2:
        raise DomainError(f"degrees of freedom must exceed 2, got {nu}")
    x = np.atleast_1d(np.asarray(x, float))
    y = np.atleast_1d(np.asarray(y, float))
    x, y = np.broadcast_arrays(x, y)
    shape = x.shape
    x, y = x.ravel(), y.ravel()
    fx = stdtr(nu, x)  # upper integration limits in probability space
    # nodes mapped to (0, fx) per point
    half = fx[:, None] / 2.0
    wmat = half * (_BVT_NODES[None, :] + 1.0)
    s = stdtrit(nu, np.clip(wmat, 1e-300, 1.0 - 1e-16))
    scale = np.sqrt((nu + 1.0) / ((1.0 - rho * rho) * (nu + s * s)))
    args = (y[:, None] - rho * s) * scale
    inner = stdtr(nu + 1.0, args)
    p = (inner @ _BVT_WEIGHTS) * half[:, 0]
    p = np.clip(p, 0.0, 1.0)
    out = p.reshape(shape)
    return float(out) if out.size == 1 and np.ndim(shape) == 1 and shape == (1,) else out


# ---------------------------------------------------------------------------
# family base class
# ---------------------------------------------------------------------------

def _as_unit(u, v, *, open_interval):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if open_interval:
        if np.any(u <= 0.0) or np.any(u >= 1.0) or np.any(v <= 0.0) or np.any(v >= 1.0):
            raise ValidationError("density arguments must lie strictly inside (0, 1)")
    else:
        if np.any(u < 0.0) or np.any(u > 1.0) or np.any(v < 0.0) or np.any(v > 1.0):
            raise ValidationError("cdf arguments must lie in [0, 1]")
    return u, v


def _clamp(u):
    return np.clip(u, _UNIT_EPS, 1.0 - _UNIT_EPS)


class Copula(abc.ABC):
    """Bivariate copula with a fixed, validated parameter."""

    name: str
    n_params: int

    @abc.abstractmethod
    def params(self) -> dict:
        """Parameter values keyed by name."""

    @abc.abstractmethod
    def _cdf_interior(self, u, v):
        ...

    @abc.abstractmethod
    def _log_density(self, u, v):
        ...

    @abc.abstractmethod
    def tau(self) -> float:
        """Population Kendall tau implied by the parameter."""

    @abc.abstractmethod
    def sample(self, n: int, rng=None) -> tuple[np.ndarray, np.ndarray]:
        """n i.i.d. pairs from the copula; rng is a seed or numpy Generator."""

    def cdf(self, u, v):
        u, v = _as_unit(u, v, open_interval=False)
        scalar = u.ndim == 0 and v.ndim == 0
        u, v = np.atleast_1d(u), np.atleast_1d(v)
        u, v = np.broadcast_arrays(u, v)
        out = np.empty(u.shape, dtype=float)
        zero = (u <= 0.0) | (v <= 0.0)
        u_top = v >= 1.0  # C(u, 1) = u
        v_top = u >= 1.0  # C(1, v) = v
        interior = ~(zero | u_top | v_top)
        out[zero] = 0.0
        out[u_top & ~zero] = u[u_top & ~zero]
        out[v_top & ~zero & ~u_top] = v[v_top & ~zero & ~u_top]
        if interior.any():
            out[interior] = self._cdf_interior(_clamp(u[interior]), _clamp(v[interior]))
        return float(out[()]) if scalar else out.reshape(u.shape)

    def log_density(self, u, v):
        u, v = _as_unit(u, v, open_interval=True)
        scalar = u.ndim == 0 and v.ndim == 0
        out = self._log_density(_clamp(np.atleast_1d(u)), _clamp(np.atleast_1d(v)))
        return float(out[0]) if scalar else np.asarray(out)

    def __repr__(self):
        inner = ", ".join(f"{k}={v:.6g}" for k, v in self.params().items())
        return f"{type(self).__name__}({inner})"


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

class IndependentCopula(Copula):
    name = "independent"
    n_params = 0

    def params(self):
        return {}

    def _cdf_interior(self, u, v):
        return u * v

    def _log_density(self, u, v):
        return np.zeros(np.broadcast_shapes(u.shape, v.shape))

    def tau(self):
        return 0.0

    @classmethod
    def from_rank_coherence(cls, k):
        return cls()

    def sample(self, n, rng=None):
        g = _rng(rng)
        return g.random(n), g.random(n)


class GaussianCopula(Copula):
    name = "gaussian"
    n_params = 1

    def __init__(self, rho: float):
        if not -1.0 < rho < 1.0:
            raise DomainError(f"gaussian copula needs rho in (-1, 1), got {rho}")
        self.rho = float(rho)

    def params(self):
        return {"rho": self.rho}

    def _cdf_interior(self, u, v):
        return bvn_cdf(ndtri(u), ndtri(v), self.rho)

    def _log_density(self, u, v):
        x, y = ndtri(u), ndtri(v)
        r = self.rho
        r2 = r * r
        return -0.5 * np.log1p(-r2) + (2.0 * r * x * y - r2 * (x * x + y * y)) / (2.0 * (1.0 - r2))

    def tau(self):
        return 2.0 / np.pi * np.arcsin(self.rho)

    @classmethod
    def from_rank_coherence(cls, k):
        if not -1.0 < k < 1.0:
            raise DomainError(f"rank coherence must lie in (-1, 1), got {k}")
        return cls(np.sin(np.pi * k / 2.0))

    @classmethod
    def from_coherence(cls, kappa, mode="paper"):
        return cls(rho_from_coherence(kappa, mode=mode))

    def sample(self, n, rng=None):
        g = _rng(rng)
        z1 = g.standard_normal(n)
        z2 = self.rho * z1 + np.sqrt(1.0 - self.rho**2) * g.standard_normal(n)
        return ndtr(z1), ndtr(z2)


class StudentTCopula(Copula):
    name = "student_t"
    n_params = 2  # rho and the profiled degrees of freedom

    def __init__(self, rho: float, nu: float):
        if not -1.0 < rho < 1.0:
            raise DomainError(f"student-t copula needs rho in (-1, 1), got {rho}")
        if nu <= 2:
            raise DomainError(f"student-t copula needs nu > 2, got {nu}")
        self.rho = float(rho)
        self.nu = float(nu)

    def params(self):
        return {"rho": self.rho, "nu": self.nu}

    def _cdf_interior(self, u, v):
        return bvt_cdf(stdtrit(self.nu, u), stdtrit(self.nu, v), self.rho, self.nu)

    def _log_density(self, u, v):
        nu, r = self.nu, self.rho
        x, y = stdtrit(nu, u), stdtrit(nu, v)
        r2 = r * r
        q = (x * x - 2.0 * r * x * y + y * y) / (nu * (1.0 - r2))
        const = (gammaln((nu + 2.0) / 2.0) + gammaln(nu / 2.0)
                 - 2.0 * gammaln((nu + 1.0) / 2.0) - 0.5 * np.log1p(-r2))
        return (const - (nu + 2.0) / 2.0 * np.log1p(q)
                + (nu + 1.0) / 2.0 * (np.log1p(x * x / nu) + np.log1p(y * y / nu)))

    def tau(self):
        return 2.0 / np.pi * np.arcsin(self.rho)

    @classmethod
    def from_rank_coherence(cls, k, nu=4.0):
        if not -1.0 < k < 1.0:
            raise DomainError(f"rank coherence must lie in (-1, 1), got {k}")
        return cls(np.sin(np.pi * k / 2.0), nu)

    def sample(self, n, rng=None):
        g = _rng(rng)
        z1 = g.standard_normal(n)
        z2 = self.rho * z1 + np.sqrt(1.0 - self.rho**2) * g.standard_normal(n)
        w = g.chisquare(self.nu, n) / self.nu
        t1, t2 = z1 / np.sqrt(w), z2 / np.sqrt(w)
        return stdtr(self.nu, t1), stdtr(self.nu, t2)


class ClaytonCopula(Copula):
    name = "clayton"
    n_params = 1

    def __init__(self, theta: float):
        if not theta > 0:
            raise DomainError(f"clayton copula needs theta > 0, got {theta}")
        self.theta = float(theta)

    def params(self):
        return {"theta": self.theta}

    @staticmethod
    def _log_s(u, v, theta):
        # log(u^-theta + v^-theta - 1), computed in log space
        a = -theta * np.log(u)
        b = -theta * np.log(v)
        m = np.maximum(a, b)
        return m + np.log(np.exp(a - m) + np.exp(b - m) - np.exp(-m))

    def _cdf_interior(self, u, v):
        return np.exp(-self._log_s(u, v, self.theta) / self.theta)

    def _log_density(self, u, v):
        th = self.theta
        return (np.log1p(th) - (th + 1.0) * (np.log(u) + np.log(v))
                - (2.0 + 1.0 / th) * self._log_s(u, v, th))

    def tau(self):
        return self.theta / (self.theta + 2.0)

    @classmethod
    def from_rank_coherence(cls, k):
        if not 0.0 < k < 1.0:
            raise DomainError(f"clayton link needs rank coherence in (0, 1), got {k}")
        return cls(2.0 * k / (1.0 - k))

    def sample(self, n, rng=None):
        g = _rng(rng)
        gam = g.gamma(1.0 / self.theta, 1.0, n)
        e1, e2 = g.exponential(1.0, n), g.exponential(1.0, n)
        return (1.0 + e1 / gam) ** (-1.0 / self.theta), (1.0 + e2 / gam) ** (-1.0 / self.theta)


class GumbelCopula(Copula):
    name = "gumbel"
    n_params = 1

    def __init__(self, theta: float):
        if not theta >= 1.0:
            raise DomainError(f"gumbel copula needs theta >= 1, got {theta}")
        self.theta = float(theta)

    def params(self):
        return {"theta": self.theta}

    @staticmethod
    def _log_a(u, v, theta):
        # log A with A = ((-log u)^theta + (-log v)^theta)^(1/theta)
        lx = np.log(-np.log(u))
        ly = np.log(-np.log(v))
        m = np.maximum(theta * lx, theta * ly)
        return (m + np.log(np.exp(theta * lx - m) + np.exp(theta * ly - m))) / theta

    def _cdf_interior(self, u, v):
        return np.exp(-np.exp(self._log_a(u, v, self.theta)))

    def _log_density(self, u, v):
        th = self.theta
        x, y = -np.log(u), -np.log(v)
        log_a = self._log_a(u, v, th)
        a = np.exp(log_a)
        return (-a + (th - 1.0) * (np.log(x) + np.log(y)) + (1.0 - 2.0 * th) * log_a
                + np.log(a + th - 1.0) + x + y)

    def tau(self):
        return 1.0 - 1.0 / self.theta

    @classmethod
    def from_rank_coherence(cls, k):
        if not 0.0 < k < 1.0:
            raise DomainError(f"gumbel link needs rank coherence in (0, 1), got {k}")
        return cls(1.0 / (1.0 - k))

    def sample(self, n, rng=None):
        g = _rng(rng)
        if self.theta == 1.0:
            return g.random(n), g.random(n)
        alpha = 1.0 / self.theta
        # positive stable frailty via Chambers-Mallows-Stuck
        vv = g.uniform(0.0, np.pi, n)
        ww = g.exponential(1.0, n)
        s = (np.sin(alpha * vv) / np.sin(vv) ** (1.0 / alpha)
             * (np.sin((1.0 - alpha) * vv) / ww) ** ((1.0 - alpha) / alpha))
        e1, e2 = g.exponential(1.0, n), g.exponential(1.0, n)
        return np.exp(-((e1 / s) ** alpha)), np.exp(-((e2 / s) ** alpha))


class FrankCopula(Copula):
    name = "frank"
    n_params = 1

    def __init__(self, theta: float):
        if theta == 0.0 or not np.isfinite(theta):
            raise DomainError(f"frank copula needs finite theta != 0, got {theta}")
        self.theta = float(theta)

    def params(self):
        return {"theta": self.theta}

    def _cdf_interior(self, u, v):
        th = self.theta
        num = np.expm1(-th * u) * np.expm1(-th * v)
        return -np.log1p(num / np.expm1(-th)) / th

    def _log_density(self, u, v):
        th = self.theta
        # D = e^{-th u} + e^{-th v} - e^{-th (u+v)} - e^{-th}; c = th (1 - e^{-th}) e^{-th(u+v)} / D^2
        d = (np.exp(-th * u) + np.exp(-th * v)
             - np.exp(-th * (u + v)) - np.exp(-th))
        return (np.log(th * -np.expm1(-th)) - th * (u + v) - 2.0 * np.log(np.abs(d)))

    def tau(self):
        th = abs(self.theta)
        val = 1.0 - 4.0 / th * (1.0 - debye1(th))
        return float(np.sign(self.theta) * val)

    @classmethod
    def from_rank_coherence(cls, k):
        lo, hi = _THETA_BRACKETS["frank"]
        limit = FrankCopula(hi).tau()
        if not -limit <= k <= limit or k == 0.0:
            raise DomainError(
                f"frank link needs nonzero rank coherence within +-{limit:.4f}, got {k}"
            )
        theta = _bisect_increasing(lambda t: FrankCopula(t).tau() if t != 0 else 0.0,
                                   lo if k < 0 else 1e-8, -1e-8 if k < 0 else hi,
                                   k, _BISECT_TOL)
        return cls(theta)

    def sample(self, n, rng=None):
        g = _rng(rng)
        th = self.theta
        u = g.random(n)
        w = g.random(n)
        a = np.expm1(-th)
        b = np.expm1(-th * u)
        y = w * a / (1.0 + b * (1.0 - w))
        return u, -np.log1p(y) / th


class JoeCopula(Copula):
    name = "joe"
    n_params = 1

    def __init__(self, theta: float):
        if not theta >= 1.0:
            raise DomainError(f"joe copula needs theta >= 1, got {theta}")
        self.theta = float(theta)

    def params(self):
        return {"theta": self.theta}

    @staticmethod
    def _log_A(u, v, theta):
        # log(xb^th + yb^th - xb^th yb^th) via exponent shifts; xb = 1-u
        a = theta * np.log1p(-u)
        b = theta * np.log1p(-v)
        m = np.maximum(a, b)
        return m + np.log(np.exp(a - m) + np.exp(b - m) - np.exp(a + b - m))

    def _cdf_interior(self, u, v):
        return -np.expm1(self._log_A(u, v, self.theta) / self.theta)

    def _log_density(self, u, v):
        th = self.theta
        log_A = self._log_A(u, v, th)
        A = np.exp(log_A)
        return ((1.0 / th - 2.0) * log_A + (th - 1.0) * (np.log1p(-u) + np.log1p(-v))
                + np.log(th - 1.0 + A))

    def tau(self):
        th = self.theta
        if th == 1.0:
            return 0.0

        def integrand(t):
            if t >= 1.0:
                return 0.0
            w = np.exp(th * np.log1p(-t))
            if w == 0.0:
                phi = -1.0
            elif w < 1e-12:
                phi = -(1.0 - w)
            else:
                phi = (1.0 - w) * np.log1p(-w) / w
            return (1.0 - t) / th * phi

        return 1.0 + 4.0 * _adaptive_simpson(integrand, 0.0, 1.0, tol=1e-11)

    @classmethod
    def from_rank_coherence(cls, k):
        lo, hi = _THETA_BRACKETS["joe"]
        limit = JoeCopula(hi).tau()
        if not 0.0 < k <= limit:
            raise DomainError(
                f"joe link needs rank coherence in (0, {limit:.4f}], got {k}"
            )
        theta = _bisect_increasing(lambda t: JoeCopula(t).tau(), lo, hi, k, _BISECT_TOL)
        return cls(theta)

    def _conditional_v_given_u(self, u, v):
        # dC/du = A^(1/th - 1) xb^(th-1) (1 - yb^th)
        th = self.theta
        log_A = self._log_A(u, v, th)
        return np.exp((1.0 / th - 1.0) * log_A + (th - 1.0) * np.log1p(-u)
                      + np.log(-np.expm1(th * np.log1p(-v))))

    def sample(self, n, rng=None):
        g = _rng(rng)
        if self.theta == 1.0:
            return g.random(n), g.random(n)
        u = g.random(n)
        w = g.random(n)
        lo = np.full(n, _UNIT_EPS)
        hi = np.full(n, 1.0 - _UNIT_EPS)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = self._conditional_v_given_u(u, mid) < w
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return u, 0.5 * (lo + hi)


FAMILIES = {
    "independent": IndependentCopula,
    "gaussian": GaussianCopula,
    "student_t": StudentTCopula,
    "clayton": ClaytonCopula,
    "gumbel": GumbelCopula,
    "frank": FrankCopula,
    "joe": JoeCopula,
}


def make_copula(name: str, **params) -> Copula:
    """Construct a copula by family name with validated parameters."""
    if name not in FAMILIES:
        raise ValidationError(f"unknown copula family {name!r}; expected one of {FAMILY_ORDER}")
    return FAMILIES[name](**params)


def rho_from_coherence(kappa: float, mode: str = "paper") -> float:
    """Gaussian-copula correlation from a coherence estimate in [0, 1).

    mode="paper" inserts the coherence directly (rho = kappa); mode="sqrt"
    uses rho = sqrt(kappa), the coherency-modulus variant.
    """
    if not 0.0 <= kappa <= 1.0:
        raise DomainError(f"coherence must lie in [0, 1], got {kappa}")
    if kappa == 1.0:
        raise DomainError("coherence of 1 gives a degenerate (comonotone) copula")
    if mode == "paper":
        return float(kappa)
    if mode == "sqrt":
        return float(np.sqrt(kappa))
    raise ValidationError(f"unknown mode {mode!r}; expected 'paper' or 'sqrt'")


def theta_from_rank_coherence(family: str, k: float, nu: float = 4.0) -> float:
    """Dependence parameter obtained by inverting the family's tau link."""
    if family == "independent":
        return 0.0
    if family == "student_t":
        return StudentTCopula.from_rank_coherence(k, nu=nu).rho
    cop = FAMILIES[family].from_rank_coherence(k)
    return cop.rho if family == "gaussian" else cop.theta


def tau_of_theta(family: str, theta: float, nu: float = 4.0) -> float:
    """Population Kendall tau of a family at a given parameter value."""
    if family == "independent":
        return 0.0
    if family in ("gaussian", "student_t"):
        kwargs = {"rho": theta} if family == "gaussian" else {"rho": theta, "nu": nu}
        return FAMILIES[family](**kwargs).tau()
    return FAMILIES[family](theta).tau()


# ---------------------------------------------------------------------------
# empirical copula surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CopulaSurface:
    """Empirical copula evaluated on the grid (i/m, j/m), i,j = 1..m."""

    grid: np.ndarray
    values: np.ndarray


def empirical_copula_surface(pseudo, m: int) -> CopulaSurface:
    """Deheuvels empirical copula of a pseudo-sample on an m x m grid."""
    if m < 2:
        raise ValidationError(f"grid size must be at least 2, got {m}")
    u, v = np.asarray(pseudo.u, float), np.asarray(pseudo.v, float)
    grid = np.arange(1, m + 1) / m
    below_u = (u[:, None] <= grid[None, :]).astype(float)  # (R, m)
    below_v = (v[:, None] <= grid[None, :]).astype(float)
    values = below_u.T @ below_v / u.size
    return CopulaSurface(grid=grid, values=values)
