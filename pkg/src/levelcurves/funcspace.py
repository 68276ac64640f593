"""Function space: polynomials, rational functions, Blaschke-product ratios.

A RationalFn is immutable after construction and caches its distinguished
points (zeros, poles, critical points with multiplicities).  Values at poles
are reported through the point-at-infinity flag ``INF`` rather than NaN.

The function-spec grammar shared with the CLI:

    poly:c_n,...,c_0            coefficients, highest degree first
    rat:<poly>/<poly>           numerator / denominator coefficient lists
    blaschke:a1,a2,.../b1,b2,...  zeros of B1 / zeros of B2, all inside the disk

Complex literals use ``a+bi`` (or ``j``) notation, e.g. ``-0.4i``, ``1+2i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
import numpy.polynomial.polynomial as npoly

from .config import DEFAULT_TOLS, Tolerances
from .errors import FunctionSpecError, RootFindingError

INF = complex(math.inf, 0.0)


def is_inf(z: complex) -> bool:
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Complex polynomial stored with ascending coefficients.

    The zero polynomial has ``degree == -inf``.  Trailing coefficients that
    are exactly zero are trimmed; approximate trimming is explicit via
    :meth:`trim`.
    """

    __slots__ = ("coeffs", "_rev")

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        n = c.size
        while n > 1 and c[n - 1] == 0:
            n -= 1
        self.coeffs = c[:n].copy()
        self.coeffs.setflags(write=False)
        # descending python tuple for the scalar Horner fast path
        self._rev = tuple(self.coeffs[::-1])

    @classmethod
    def from_roots(cls, roots, leading: complex = 1.0) -> "Polynomial":
        c = np.array([leading], dtype=complex)
        for r in roots:
            c = npoly.polymul(c, np.array([-r, 1.0], dtype=complex))
        return cls(c)

    @property
    def degree(self):
        if self.coeffs.size == 1 and self.coeffs[0] == 0:
            return float("-inf")
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return npoly.polyval(z, self.coeffs)
        acc = 0j
        for c in self._rev:
            acc = acc * z + c
        return acc

    def deriv(self) -> "Polynomial":
        if self.coeffs.size == 1:
            return Polynomial([0.0])
        return Polynomial(npoly.polyder(self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polymul(self.coeffs, other.coeffs))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polysub(self.coeffs, other.coeffs))

    def scale(self, k: complex) -> "Polynomial":
        return Polynomial(self.coeffs * k)

    def trim(self, rel: float = 1e-13) -> "Polynomial":
        m = float(np.max(np.abs(self.coeffs)))
        if m == 0.0:
            return Polynomial([0.0])
        c = self.coeffs.copy()
        c[np.abs(c) <= rel * m] = 0.0
        return Polynomial(c)

    def coeff_scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def roots(self, tols: Tolerances = DEFAULT_TOLS) -> list[tuple[complex, int]]:
        """Roots with multiplicities, residual-checked and clustered."""
        return find_roots(self.coeffs, tols)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


def _aberth(coeffs: np.ndarray, maxiter: int = 400) -> np.ndarray:
    """Simultaneous (Ehrlich-Aberth) iteration on a monic polynomial.

    ``coeffs`` ascending with nonzero leading and nonzero constant term
    (zero roots must be factored out by the caller).
    """
    c = coeffs / coeffs[-1]
    n = c.size - 1
    dc = npoly.polyder(c)
    # Cauchy bound start circle with an asymmetry offset so symmetric
    # configurations (roots of unity) do not stall
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    angles = 2.0 * np.pi * (np.arange(n) + 0.353) / n + 0.41
    z = radius * 0.7 * np.exp(1j * angles)

    for _ in range(maxiter):
        pz = npoly.polyval(z, c)
        dpz = npoly.polyval(z, dc)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        newton = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        denom = 1.0 - newton * inv.sum(axis=1)
        denom = np.where(denom == 0, 1e-300, denom)
        step = newton / denom
        z = z - step
        if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(z))):
            break
    return z


def find_roots(coeffs, tols: Tolerances = DEFAULT_TOLS) -> list[tuple[complex, int]]:
    """All roots of a polynomial with multiplicities.

    Exact zero roots are factored out first (they carry exact multiplicity),
    the rest go through Aberth iteration, distance clustering, and a Newton
    polish of each cluster on the appropriate derivative.  Raises
    :class:`RootFindingError` when a reported root fails its residual gate.
    """
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
    n = c.size
    while n > 1 and c[n - 1] == 0:
        n -= 1
    c = c[:n]
    if n == 1:
        return []

    scale = float(np.max(np.abs(c)))
    work = c / scale
    work[np.abs(work) <= 1e-14] = 0.0

    zero_mult = 0
    while work.size > 1 and work[0] == 0:
        work = work[1:]
        zero_mult += 1

    raw: list[complex] = []
    if work.size > 1:
        raw = list(_aberth(work))

    clusters = _cluster_points(raw, tols)
    clusters = _merge_multiple_roots(clusters, work, tols)
    out: list[tuple[complex, int]] = []
    if zero_mult:
        out.append((0j, zero_mult))

    derivs = [work]
    for _ in range(max((m for _, m in clusters), default=1) - 1):
        derivs.append(npoly.polyder(derivs[-1]))

    residual_cap = tols.root_residual * (1.0 + float(np.max(np.abs(work))))
    worst = 0.0
    for center, mult in clusters:
        # a multiplicity-m cluster mean is a simple root of the (m-1)th derivative
        target = derivs[mult - 1]
        dtarget = npoly.polyder(target) if target.size > 1 else np.array([0j])
        z = center
        for _ in range(8):
            dv = npoly.polyval(z, dtarget)
            if dv == 0:
                break
            step = npoly.polyval(z, target) / dv
            z = z - step
            if abs(step) < 1e-15 * (1.0 + abs(z)):
                break
        res = abs(npoly.polyval(z, work))
        worst = max(worst, res)
        if res > residual_cap * max(1.0, abs(z)) ** max(work.size - 1, 1):
            raise RootFindingError(
                f"root candidate {z} has residual {res:.3e} above gate", residual=res
            )
        out.append((complex(z), mult))

    out.sort(key=lambda rm: (round(rm[0].real, 12), round(rm[0].imag, 12)))
    return out


def _merge_multiple_roots(clusters, work: np.ndarray, tols: Tolerances):
    """Merge root clusters that are indistinguishable from one multiple root.

    A multiplicity-m root under coefficient noise eta scatters by eta^(1/m),
    so candidates within (1e3*eps_mach)^(1/m) of each other are tried as one
    root of multiplicity m.  The merge is accepted only when the polished
    center annihilates p and its first m-1 derivatives to noise level, which
    a genuinely separated simple cluster cannot do.
    """
    if len(clusters) < 2:
        return clusters
    derivs = [work]
    for _ in range(work.size - 1):
        derivs.append(npoly.polyder(derivs[-1]))
    noise = 1e3 * np.finfo(float).eps

    def radius(m, scale):
        return noise ** (1.0 / m) * scale

    def verify(center, m):
        target = derivs[m - 1]
        dtarget = derivs[m] if m < len(derivs) else np.array([0j])
        c = center
        for _ in range(10):
            dv = npoly.polyval(c, dtarget)
            if dv == 0:
                break
            step = npoly.polyval(c, target) / dv
            c = c - step
            if abs(step) < 1e-15 * (1.0 + abs(c)):
                break
        zscale = max(1.0, abs(c))
        for j in range(m):
            gate = 1e-8 * (1.0 + float(np.max(np.abs(derivs[j])))) * zscale ** max(
                derivs[j].size - 1, 1
            )
            if abs(npoly.polyval(c, derivs[j])) > gate:
                return None
        return c

    merged = True
    while merged and len(clusters) > 1:
        merged = False
        for i, (ci, mi) in enumerate(clusters):
            others = sorted(
                (abs(cj - ci), j) for j, (cj, _) in enumerate(clusters) if j != i
            )
            scale = max(1.0, abs(ci))
            for k in range(len(others), 0, -1):
                group = [i] + [j for _, j in others[:k]]
                m_total = sum(clusters[j][1] for j in group)
                if others[k - 1][0] > radius(m_total, scale):
                    continue
                center = sum(clusters[j][0] * clusters[j][1] for j in group) / m_total
                polished = verify(center, m_total)
                if polished is None:
                    continue
                clusters = [clusters[j] for j in range(len(clusters)) if j not in group]
                clusters.append((polished, m_total))
                merged = True
                break
            if merged:
                break
    return clusters


def _cluster_points(points, tols: Tolerances) -> list[tuple[complex, int]]:
    if not points:
        return []
    pts = sorted(points, key=lambda z: (z.real, z.imag))
    scale = max(1.0, max(abs(z) for z in pts))
    tol = tols.root_cluster_rel * scale
    groups: list[list[complex]] = []
    for z in pts:
        for g in groups:
            if abs(z - g[0]) < tol or abs(z - sum(g) / len(g)) < tol:
                g.append(z)
                break
        else:
            groups.append([z])
    return [(sum(g) / len(g), len(g)) for g in groups]


# ---------------------------------------------------------------------------
# domains


class DomainKind(Enum):
    WHOLE_PLANE = "plane"
    UNIT_DISK = "disk"
    RECTANGLE = "rect"


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind = DomainKind.WHOLE_PLANE
    bounds: tuple[float, float, float, float] | None = None  # x0, y0, x1, y1

    def __post_init__(self):
        if self.kind is DomainKind.RECTANGLE:
            if self.bounds is None:
                raise FunctionSpecError("rectangle domain needs bounds")
            x0, y0, x1, y1 = self.bounds
            if not (x0 < x1 and y0 < y1):
                raise FunctionSpecError(f"degenerate rectangle bounds {self.bounds}")

    def contains(self, z: complex) -> bool:
        if is_inf(z):
            return False
        if self.kind is DomainKind.WHOLE_PLANE:
            return True
        if self.kind is DomainKind.UNIT_DISK:
            return abs(z) < 1.0
        x0, y0, x1, y1 = self.bounds
        return x0 < z.real < x1 and y0 < z.imag < y1

    @staticmethod
    def plane() -> "DomainSpec":
        return DomainSpec(DomainKind.WHOLE_PLANE)

    @staticmethod
    def disk() -> "DomainSpec":
        return DomainSpec(DomainKind.UNIT_DISK)

    @staticmethod
    def rect(x0, y0, x1, y1) -> "DomainSpec":
        return DomainSpec(DomainKind.RECTANGLE, (x0, y0, x1, y1))


# ---------------------------------------------------------------------------
# rational functions


class RationalFn:
    """Ratio of two coprime polynomials with cached distinguished points.

    Instances are immutable; every method is pure, so sharing across threads
    is safe.  Construction rejects constant functions and numerator /
    denominator pairs with a (numerically) common root.
    """

    def __init__(
        self,
        numerator: Polynomial,
        denominator: Polynomial | None = None,
        domain: DomainSpec | None = None,
        tols: Tolerances = DEFAULT_TOLS,
        blaschke_degrees: tuple[int, int] | None = None,
        spec: str | None = None,
    ):
        if denominator is None:
            denominator = Polynomial([1.0])
        if numerator.is_zero or denominator.is_zero:
            raise FunctionSpecError("numerator and denominator must be nonzero")
        if numerator.degree == 0 and denominator.degree == 0:
            raise FunctionSpecError("constant functions are not allowed")
        self.numerator = numerator
        self.denominator = denominator
        self.domain = domain or DomainSpec.plane()
        self.tols = tols
        self.blaschke_degrees = blaschke_degrees
        self.spec = spec

        if self.domain.kind is DomainKind.UNIT_DISK and blaschke_degrees is None:
            raise FunctionSpecError("unit-disk domain is reserved for Blaschke ratios")

        self._check_coprime()

    # -- construction helpers

    @classmethod
    def from_polynomial(cls, coeffs_desc, **kw) -> "RationalFn":
        return cls(Polynomial(list(reversed(list(coeffs_desc)))), **kw)

    @classmethod
    def blaschke_ratio(cls, zeros1, zeros2, tols: Tolerances = DEFAULT_TOLS, spec=None) -> "RationalFn":
        """f = B1/B2 for finite Blaschke products with the given zeros."""
        zeros1 = [complex(a) for a in zeros1]
        zeros2 = [complex(b) for b in zeros2]
        for a in zeros1 + zeros2:
            if abs(a) >= 1.0:
                raise FunctionSpecError(f"Blaschke zero {a} must lie strictly inside the unit disk")
        if len(zeros1) == len(zeros2):
            # equal degrees force a level curve through the boundary circle
            raise FunctionSpecError("deg(B1) == deg(B2) violates the boundary restriction")
        num = Polynomial([1.0])
        den = Polynomial([1.0])
        for a in zeros1:
            num = num * Polynomial([-a, 1.0])
            den = den * Polynomial([1.0, -a.conjugate()])
        for b in zeros2:
            num = num * Polynomial([1.0, -b.conjugate()])
            den = den * Polynomial([-b, 1.0])
        return cls(
            num.trim(),
            den.trim(),
            domain=DomainSpec.disk(),
            tols=tols,
            blaschke_degrees=(len(zeros1), len(zeros2)),
            spec=spec,
        )

    def _check_coprime(self):
        nz = [r for r, _ in self.numerator.roots(self.tols)]
        dz = [r for r, _ in self.denominator.roots(self.tols)]
        scale = max(
            [1.0]
            + [abs(r) for r in nz]
            + [abs(r) for r in dz]
        )
        for a in nz:
            for b in dz:
                if abs(a - b) < 1e-9 * scale:
                    raise FunctionSpecError(
                        f"numerator and denominator share a root near {a}"
                    )

    def check_boundary_restriction(self):
        """Reject configurations whose level curves touch the domain boundary.

        On the unit disk this requires |f| - 1 to be one-signed on a thin
        collar just inside the circle; the global structure operations
        (nesting order, decomposition) call this before relying on it.
        """
        if self.domain.kind is not DomainKind.UNIT_DISK:
            return
        theta = np.linspace(0.0, 2.0 * np.pi, 257)[:-1]
        ring = 0.999 * np.exp(1j * theta)
        vals = np.abs(self.eval_grid(ring)) - 1.0
        if not (np.all(vals > 0) or np.all(vals < 0)):
            raise FunctionSpecError(
                "a level curve of |f| = 1 meets the unit circle; "
                "the boundary restriction fails for this Blaschke ratio"
            )

    # -- evaluation

    def eval(self, z: complex) -> complex:
        nv = self.numerator(z)
        dv = self.denominator(z)
        if dv == 0:
            return INF
        return nv / dv

    def eval_grid(self, z: np.ndarray) -> np.ndarray:
        nv = self.numerator(z)
        dv = self.denominator(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = nv / dv
        bad = dv == 0
        if np.any(bad):
            out = np.where(bad, INF, out)
        return out

    def abs_eval(self, z: complex) -> float:
        dv = self.denominator(z)
        if dv == 0:
            return math.inf
        return abs(self.numerator(z)) / abs(dv)

    def abs_grid(self, z: np.ndarray) -> np.ndarray:
        nv = np.abs(self.numerator(z))
        dv = np.abs(self.denominator(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = nv / dv
        return np.where(dv == 0.0, np.inf, out)

    def eval_derivative(self, z: complex) -> complex:
        dv = self.denominator(z)
        if dv == 0:
            return INF
        nv = self.numerator(z)
        ndv = self._dnum(z)
        ddv = self._dden(z)
        return (ndv * dv - nv * ddv) / (dv * dv)

    def log_derivative(self, z: complex) -> complex:
        """f'/f evaluated as num'/num - den'/den; stable away from roots."""
        nv = self.numerator(z)
        dv = self.denominator(z)
        if nv == 0 or dv == 0:
            return INF
        return self._dnum(z) / nv - self._dden(z) / dv

    def _dnum(self, z):
        return self._num_deriv(z)

    def _dden(self, z):
        return self._den_deriv(z)

    @cached_property
    def _num_deriv(self) -> Polynomial:
        return self.numerator.deriv()

    @cached_property
    def _den_deriv(self) -> Polynomial:
        return self.denominator.deriv()

    @cached_property
    def derivative_numerator(self) -> Polynomial:
        """Numerator of f' before removal of pole factors: n'd - nd'."""
        return (self._num_deriv * self.denominator - self.numerator * self._den_deriv).trim()

    # -- distinguished points

    @cached_property
    def zeros(self) -> list[tuple[complex, int]]:
        return [
            (z, m) for z, m in self.numerator.roots(self.tols) if self.domain.contains(z)
        ]

    @cached_property
    def poles(self) -> list[tuple[complex, int]]:
        return [
            (z, m) for z, m in self.denominator.roots(self.tols) if self.domain.contains(z)
        ]

    @cached_property
    def all_critical_points(self) -> list[tuple[complex, int]]:
        """Zeros of f' in the plane with multiplicities (pole factors removed)."""
        w = self.derivative_numerator
        if w.is_zero:
            raise FunctionSpecError("f' vanishes identically; f is constant")
        roots = w.roots(self.tols)
        # a pole of order m contributes an (m-1)-fold spurious root of n'd - nd'
        poles_all = self.denominator.roots(self.tols)
        scale = max([1.0] + [abs(p) for p, _ in poles_all])
        out = []
        for z, m in roots:
            drop = 0
            for p, pm in poles_all:
                if pm >= 2 and abs(z - p) < 1e-7 * scale:
                    drop = pm - 1
                    break
            if m > drop:
                out.append((z, m - drop))
            elif drop == 0:
                out.append((z, m))
        return out

    @cached_property
    def critical_points(self) -> list[tuple[complex, int]]:
        """Critical points inside the associated domain."""
        return [(z, m) for z, m in self.all_critical_points if self.domain.contains(z)]

    def zeros_and_poles(self) -> tuple[list[tuple[complex, int]], list[tuple[complex, int]]]:
        return self.zeros, self.poles

    def distinguished_points(self) -> list[complex]:
        return [z for z, _ in self.zeros] + [z for z, _ in self.poles] + [
            z for z, _ in self.critical_points
        ]

    def coeff_scale(self) -> float:
        return max(self.numerator.coeff_scale(), self.denominator.coeff_scale())

    def __repr__(self):
        if self.spec:
            return f"RationalFn({self.spec!r})"
        return f"RationalFn({list(self.numerator.coeffs)}, {list(self.denominator.coeffs)})"


# ---------------------------------------------------------------------------
# spec grammar


def _parse_complex(token: str) -> complex:
    t = token.strip().replace("i", "j")
    if not t:
        raise FunctionSpecError("empty complex literal")
    try:
        return complex(t)
    except ValueError as exc:
        raise FunctionSpecError(f"bad complex literal {token!r}") from exc


def _parse_coeff_list(body: str) -> list[complex]:
    items = [tok for tok in body.split(",") if tok.strip()]
    if not items:
        raise FunctionSpecError(f"empty coefficient list in {body!r}")
    return [_parse_complex(tok) for tok in items]


def parse_function_spec(spec: str, tols: Tolerances = DEFAULT_TOLS) -> RationalFn:
    """Parse the shared ``poly:`` / ``rat:`` / ``blaschke:`` grammar."""
    s = spec.strip()
    if s.startswith("poly:"):
        coeffs = _parse_coeff_list(s[len("poly:"):])
        return RationalFn.from_polynomial(coeffs, tols=tols, spec=s)
    if s.startswith("rat:"):
        body = s[len("rat:"):]
        if "/" not in body:
            raise FunctionSpecError("rat: spec needs <poly>/<poly>")
        num_s, den_s = body.split("/", 1)
        num = Polynomial(list(reversed(_parse_coeff_list(num_s))))
        den = Polynomial(list(reversed(_parse_coeff_list(den_s))))
        return RationalFn(num, den, tols=tols, spec=s)
    if s.startswith("blaschke:"):
        body = s[len("blaschke:"):]
        if "/" not in body:
            raise FunctionSpecError("blaschke: spec needs zeros1/zeros2")
        z1_s, z2_s = body.split("/", 1)
        z1 = _parse_coeff_list(z1_s) if z1_s.strip() else []
        z2 = _parse_coeff_list(z2_s) if z2_s.strip() else []
        if not z1 and not z2:
            raise FunctionSpecError("blaschke: spec needs at least one zero")
        return RationalFn.blaschke_ratio(z1, z2, tols=tols, spec=s)
    raise FunctionSpecError(f"unknown function spec {spec!r}")


def parse_domain_spec(spec: str) -> DomainSpec:
    s = spec.strip().lower()
    if s == "plane":
        return DomainSpec.plane()
    if s == "disk":
        return DomainSpec.disk()
    if s.startswith("rect:"):
        vals = [float(v) for v in s[len("rect:"):].split(",")]
        if len(vals) != 4:
            raise FunctionSpecError("rect domain needs x0,y0,x1,y1")
        return DomainSpec.rect(*vals)
    raise FunctionSpecError(f"unknown domain spec {spec!r}")


def random_polynomial(rng: np.random.Generator, degree: int) -> Polynomial:
    """Random polynomial with coefficients in the complex unit box."""
    coeffs = rng.uniform(-1.0, 1.0, degree + 1) + 1j * rng.uniform(-1.0, 1.0, degree + 1)
    while abs(coeffs[-1]) < 0.25:
        coeffs[-1] = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
    return Polynomial(coeffs)
