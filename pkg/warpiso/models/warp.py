"""
@author jacobi petrucciani
@desc warping profiles, fibers, radial weights and the warped product spaces built from them
"""
import logging
import math
import re
from dataclasses import dataclass
from types import SimpleNamespace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import gamma

from warpiso.errors import (
    DomainError,
    InvalidWeight,
    PreconditionError,
    UnsupportedConfiguration,
)
from warpiso.models.quadrature import (
    DEFAULT_RADIAL_TOLERANCE,
    integrate_radial,
    integrate_radial_cumulative,
)


logger = logging.getLogger(__name__)

DEFAULT_CONVEXITY_SAMPLES = 4096
DEFAULT_WORKING_SPAN = 5.0
# smallest relative tolerance brentq accepts
INVERSE_RTOL = 4.0 * float(np.finfo(float).eps)
CONVEXITY_TOLERANCE = 1e-9
FD_STEP = 1e-4
SPACE_FORM_SAMPLES = 64
SPACE_FORM_TOLERANCE = 1e-6
SPACE_FORMS = ("euclidean", "hyperbolic", "spherical", "hemisphere")

Triple = Tuple[Any, Any, Any]
ProfileFunction = Callable[[np.ndarray], Triple]
Number = Union[float, np.ndarray]

NOTATION = re.compile(r"^\s*([A-Za-z][\w\-\.]*)\s*(?:\((.*)\))?\s*$")


def parse_notation(text: str) -> Tuple[str, List[Any], Dict[str, Any]]:
    """
    @cc 6
    @desc split call-like notation such as "power(-1)" or "ellipse(a=2, b=1)"
    @arg text: the notation string
    @ret the name, positional values and keyword values
    """
    match = NOTATION.match(text)
    if not match:
        raise ValueError("cannot parse {!r}".format(text))
    name, inner = match.group(1).lower(), match.group(2)
    args: List[Any] = []
    kwargs: Dict[str, Any] = {}
    if inner and inner.strip():
        for part in inner.split(","):
            part = part.strip()
            key, eq, value = part.partition("=")
            target = value.strip() if eq else key
            try:
                parsed: Any = float(target)
            except ValueError:
                parsed = target
            if eq:
                kwargs[key.strip()] = parsed
            else:
                args.append(parsed)
    return name, args, kwargs


def unit_ball_volume(n: int) -> float:
    """
    @cc 1
    @desc volume beta_n of the unit ball in R^n
    @arg n: the dimension
    @ret pi^(n/2) / Gamma(n/2 + 1)
    """
    return float(math.pi ** (n / 2.0) / gamma(n / 2.0 + 1.0))


def round_sphere_volume(m: int, radius: float = 1.0) -> float:
    """
    @cc 1
    @desc volume of the round m-sphere of the given radius
    @arg m: the sphere dimension
    @arg radius: the sphere radius
    @ret (m + 1) beta_(m+1) R^m
    """
    return (m + 1) * unit_ball_volume(m + 1) * radius ** m


def _finite_differences(func: Callable[[np.ndarray], np.ndarray], r: np.ndarray) -> Triple:
    """
    @cc 1
    @desc centered first and second differences of a scalar function
    """
    h = FD_STEP * np.maximum(1.0, np.abs(r))
    f0 = func(r)
    fp, fm = func(r + h), func(r - h)
    return f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)


class WarpProfile:
    """
    @desc a warping function s(r) together with its first two derivatives
    """

    def __init__(
        self,
        label: str,
        func: ProfileFunction,
        domain_end: float = math.inf,
        domain_start: float = 0.0,
        vanishing_at_zero: Optional[bool] = None,
    ) -> None:
        """
        @cc 3
        @desc profile constructor
        @arg label: the catalog name of this profile
        @arg func: vectorized r -> (s, s', s'')
        @arg domain_end: the (excluded) end of the radial domain, may be inf
        @arg domain_start: the start of the radial domain, 0 for the usual warped products
        @arg vanishing_at_zero: whether s vanishes at the start, computed when omitted
        """
        if not domain_end > domain_start:
            raise DomainError("empty domain [{}, {})".format(domain_start, domain_end))
        self.label = label
        self._func = func
        self.domain_start = float(domain_start)
        self.domain_end = float(domain_end)
        if vanishing_at_zero is None:
            vanishing_at_zero = bool(abs(float(func(np.array(domain_start))[0])) < 1e-300)
        self.vanishing_at_zero = vanishing_at_zero

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the string representation of this profile
        """
        return "<WarpProfile {} on [{:g}, {:g})>".format(
            self.label, self.domain_start, self.domain_end
        )

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this profile
        """
        return self.__str__()

    def __call__(self, r: Number) -> Number:
        """
        @cc 1
        @desc the warping function itself
        @arg r: radius or array of radii
        @ret s(r)
        """
        return self.evaluate(r)[0]

    @property
    def bounded(self) -> bool:
        """
        @cc 1
        @desc whether the radial domain is finite
        @ret true if domain_end is finite
        """
        return math.isfinite(self.domain_end)

    @property
    def space_form(self) -> Optional[str]:
        """
        @cc 4
        @desc the constant curvature catalog profile this one agrees with on the same
        domain, compared by (s, s', s'') values on sampled radii, so linear(1) is euclidean
        @ret the space form name, or None
        """
        if self.label in SPACE_FORMS:
            return self.label
        for name in SPACE_FORMS:
            model = PROFILE_CATALOG[name]()
            if (model.domain_start, model.domain_end) != (self.domain_start, self.domain_end):
                continue
            top = min(self.domain_end, self.domain_start + DEFAULT_WORKING_SPAN)
            steps = (np.arange(SPACE_FORM_SAMPLES) + 0.5) / SPACE_FORM_SAMPLES
            r = self.domain_start + (top - self.domain_start) * steps
            if all(
                np.allclose(ours, theirs, rtol=SPACE_FORM_TOLERANCE, atol=SPACE_FORM_TOLERANCE)
                for ours, theirs in zip(self.raw(r), model.raw(r))
            ):
                logger.debug("profile %s agrees with the %s model", self.label, name)
                return name
        return None

    def contains(self, r: Number) -> bool:
        """
        @cc 1
        @desc check that radii lie in [domain_start, domain_end)
        @arg r: radius or array of radii
        @ret true if every radius is admissible
        """
        values = np.asarray(r, dtype=float)
        return bool(np.all((values >= self.domain_start) & (values < self.domain_end)))

    def evaluate(self, r: Number) -> Triple:
        """
        @cc 3
        @desc evaluate (s, s', s'') with a domain check
        @arg r: radius or array of radii
        @ret the triple, floats for scalar input and arrays otherwise
        """
        if not self.contains(r):
            raise DomainError(
                "radius outside [{:g}, {:g}) for profile {}".format(
                    self.domain_start, self.domain_end, self.label
                )
            )
        return self.raw(r)

    def raw(self, r: Number) -> Triple:
        """
        @cc 2
        @desc evaluate (s, s', s'') without the domain check
        """
        values = np.asarray(r, dtype=float)
        s, ds, d2s = (
            np.broadcast_to(np.asarray(x, dtype=float), values.shape)
            for x in self._func(values)
        )
        if values.ndim == 0:
            return float(s), float(ds), float(d2s)
        return np.array(s), np.array(ds), np.array(d2s)

    @classmethod
    def from_callable(
        cls,
        label: str,
        s: Callable[[np.ndarray], np.ndarray],
        ds: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        d2s: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        domain_end: float = math.inf,
        domain_start: float = 0.0,
    ) -> "WarpProfile":
        """
        @cc 2
        @desc profile from a vectorized s with optional analytic derivatives
        @arg label: the profile name
        @arg s: vectorized warping function
        @arg ds: optional s'
        @arg d2s: optional s''
        @arg domain_end: the domain end
        @arg domain_start: the domain start
        @ret the profile, derivatives by centered differences where not supplied
        """

        def func(r: np.ndarray) -> Triple:
            f0, f1, f2 = _finite_differences(s, r)
            return f0, ds(r) if ds else f1, d2s(r) if d2s else f2

        return cls(label, func, domain_end, domain_start)

    @classmethod
    def from_spline_file(cls, path: str) -> "WarpProfile":
        """
        @cc 3
        @desc cubic spline profile from a two-column (r, s) text file
        @arg path: the spline file
        @ret the sampled profile
        """
        data = np.loadtxt(path, dtype=float, ndmin=2)
        if data.shape[1] != 2 or data.shape[0] < 4:
            raise ValueError("spline file {} needs at least 4 rows of (r, s)".format(path))
        data = data[np.argsort(data[:, 0])]
        spline = CubicSpline(data[:, 0], data[:, 1])
        first, second = spline.derivative(1), spline.derivative(2)

        def func(r: np.ndarray) -> Triple:
            return spline(r), first(r), second(r)

        return cls(
            "custom-spline({})".format(path),
            func,
            domain_end=float(data[-1, 0]),
            domain_start=float(data[0, 0]),
        )

    @classmethod
    def get(cls, text: str) -> "WarpProfile":
        """
        @cc 3
        @desc get a catalog profile by its notation
        @arg text: e.g. "euclidean", "hyperbolic", "power(-1)", "custom-spline(file.txt)"
        @ret the profile
        """
        name, args, kwargs = parse_notation(text)
        if name not in PROFILE_CATALOG:
            raise ValueError(
                "unknown profile {!r}, expected one of {}".format(name, sorted(PROFILE_CATALOG))
            )
        return PROFILE_CATALOG[name](*args, **kwargs)


def _euclidean() -> WarpProfile:
    return WarpProfile("euclidean", lambda r: (r, 1.0, 0.0))


def _linear(slope: float = 1.0) -> WarpProfile:
    return WarpProfile("linear({:g})".format(slope), lambda r: (slope * r, slope, 0.0))


def _hyperbolic() -> WarpProfile:
    return WarpProfile("hyperbolic", lambda r: (np.sinh(r), np.cosh(r), np.sinh(r)))


def _spherical() -> WarpProfile:
    return WarpProfile(
        "spherical", lambda r: (np.sin(r), np.cos(r), -np.sin(r)), domain_end=math.pi
    )


def _hemisphere() -> WarpProfile:
    return WarpProfile(
        "hemisphere", lambda r: (np.sin(r), np.cos(r), -np.sin(r)), domain_end=math.pi / 2.0
    )


def _exponential() -> WarpProfile:
    return WarpProfile("exponential", lambda r: (np.exp(r), np.exp(r), np.exp(r)))


def _power(alpha: float = -1.0) -> WarpProfile:
    def func(r: np.ndarray) -> Triple:
        return r ** alpha, alpha * r ** (alpha - 1.0), alpha * (alpha - 1.0) * r ** (alpha - 2.0)

    return WarpProfile("power({:g})".format(alpha), func, domain_start=1.0)


PROFILE_CATALOG: Dict[str, Callable[..., WarpProfile]] = {
    "euclidean": _euclidean,
    "linear": _linear,
    "hyperbolic": _hyperbolic,
    "spherical": _spherical,
    "hemisphere": _hemisphere,
    "exponential": _exponential,
    "power": _power,
    "custom-spline": WarpProfile.from_spline_file,
}


class Realization(SimpleNamespace):
    """
    @desc fiber realization namespace class
    """


class FiberSpec:
    """
    @desc the compact fiber N of a warped product
    """

    class Realizations:
        """
        @desc fiber realization enum
        """

        CIRCLE = Realization(name="circle", discretizable=True)
        ROUND_SPHERE = Realization(name="round-sphere", discretizable=True)
        ABSTRACT = Realization(name="abstract", discretizable=False)

    def __init__(
        self,
        dimension: int,
        total_volume: float,
        lambda1: Optional[float] = None,
        ricci_lower_K: Optional[float] = None,
        realization: Realization = Realizations.ABSTRACT,
        radius: Optional[float] = None,
        label: Optional[str] = None,
    ) -> None:
        """
        @cc 4
        @desc fiber constructor, prefer circle(), sphere() and abstract()
        @arg dimension: the fiber dimension m
        @arg total_volume: the fiber volume |N|
        @arg lambda1: first nonzero Laplacian eigenvalue of the fiber, if known
        @arg ricci_lower_K: K such that Ric_N >= (m - 1) K g_N, if known
        @arg realization: how the fiber is realized
        @arg radius: the radius of a realized fiber
        @arg label: display name
        """
        if int(dimension) != dimension or dimension < 1:
            raise PreconditionError("fiber dimension must be a positive integer")
        if not total_volume > 0:
            raise PreconditionError("fiber volume must be positive")
        if lambda1 is not None and lambda1 < 0:
            raise PreconditionError("lambda1 must be nonnegative")
        self.dimension = int(dimension)
        self.total_volume = float(total_volume)
        self.lambda1 = lambda1
        self.ricci_lower_K = ricci_lower_K
        self.realization = realization
        self.radius = radius
        self.label = label or "{}(m={})".format(realization.name, self.dimension)

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the string representation of this fiber
        """
        return "<FiberSpec {} |N|={:.6g}>".format(self.label, self.total_volume)

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this fiber
        """
        return self.__str__()

    @classmethod
    def circle(cls, radius: float = 1.0) -> "FiberSpec":
        """
        @cc 1
        @desc the circle S1(R)
        @arg radius: the circle radius
        @ret the fiber with |N| = 2 pi R and lambda1 = 1 / R^2
        """
        return cls(
            1,
            2.0 * math.pi * radius,
            lambda1=1.0 / radius ** 2,
            ricci_lower_K=None,
            realization=cls.Realizations.CIRCLE,
            radius=radius,
            label="S1({:g})".format(radius),
        )

    @classmethod
    def sphere(cls, dimension: int = 2, radius: float = 1.0) -> "FiberSpec":
        """
        @cc 2
        @desc the round sphere S^m(R)
        @arg dimension: the sphere dimension m, m = 1 gives the circle
        @arg radius: the sphere radius
        @ret the fiber with lambda1 = m / R^2 and Ricci bound K = 1 / R^2
        """
        if dimension == 1:
            return cls.circle(radius)
        return cls(
            dimension,
            round_sphere_volume(dimension, radius),
            lambda1=dimension / radius ** 2,
            ricci_lower_K=1.0 / radius ** 2,
            realization=cls.Realizations.ROUND_SPHERE,
            radius=radius,
            label="S{}({:g})".format(dimension, radius),
        )

    @classmethod
    def abstract(
        cls,
        dimension: int,
        total_volume: float,
        lambda1: Optional[float] = None,
        ricci_lower_K: Optional[float] = None,
    ) -> "FiberSpec":
        """
        @cc 1
        @desc a fiber known only through its invariants, radial computations only
        @ret the abstract fiber
        """
        return cls(dimension, total_volume, lambda1, ricci_lower_K, cls.Realizations.ABSTRACT)

    @classmethod
    def get(cls, text: str) -> "FiberSpec":
        """
        @cc 4
        @desc get a fiber by notation: "S1(2)", "S2(1)", "S3", "abstract(m=2, volume=5)"
        @arg text: the notation string
        @ret the fiber
        """
        name, args, kwargs = parse_notation(text)
        sphere = re.match(r"^s(\d+)$", name)
        if sphere:
            radius = float(args[0]) if args else float(kwargs.get("r", 1.0))
            return cls.sphere(int(sphere.group(1)), radius)
        if name == "abstract":
            return cls.abstract(
                int(kwargs["m"]),
                float(kwargs["volume"]),
                kwargs.get("lambda1"),
                kwargs.get("k"),
            )
        raise ValueError("unknown fiber {!r}".format(text))

    @property
    def discretizable(self) -> bool:
        """
        @cc 1
        @desc whether hypersurfaces over this fiber can be discretized
        @ret true for circles and round 2-spheres
        """
        return bool(self.realization.discretizable) and self.dimension <= 2

    @property
    def curvature(self) -> Optional[float]:
        """
        @cc 2
        @desc the constant sectional curvature of a realized fiber
        @ret 1 / R^2 for round spheres, None for circles and abstract fibers
        """
        if self.realization is FiberSpec.Realizations.ROUND_SPHERE and self.radius:
            return 1.0 / self.radius ** 2
        return None

    def ricci_bound_holds(self, K: float) -> Optional[bool]:
        """
        @cc 3
        @desc check Ric_N >= (m - 1) K g_N
        @arg K: the curvature bound
        @ret true/false, or None when the fiber carries no Ricci information
        """
        if self.dimension == 1:
            return True
        if self.ricci_lower_K is None:
            return None
        return bool(self.ricci_lower_K >= K - CONVEXITY_TOLERANCE)


class RadialWeight:
    """
    @desc a radial function r -> a(r) with its first two derivatives
    """

    def __init__(
        self,
        label: str,
        func: Callable[[np.ndarray], np.ndarray],
        derivatives: Optional[Callable[[np.ndarray], Triple]] = None,
    ) -> None:
        """
        @cc 1
        @desc weight constructor
        @arg label: the weight notation
        @arg func: vectorized values
        @arg derivatives: vectorized (f, f', f''), centered differences when omitted
        """
        self.label = label
        self._func = func
        self._derivatives = derivatives

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the weight notation
        """
        return "<RadialWeight {}>".format(self.label)

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this weight
        """
        return self.__str__()

    def __call__(self, r: Number) -> Number:
        """
        @cc 2
        @desc evaluate the weight
        @arg r: radius or array of radii
        @ret the weight values
        """
        values = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            result = np.broadcast_to(np.asarray(self._func(values), dtype=float), values.shape)
        return float(result) if values.ndim == 0 else np.array(result)

    def derivatives(self, r: Number) -> Triple:
        """
        @cc 2
        @desc evaluate (f, f', f'')
        @arg r: radius or array of radii
        @ret the triple of arrays
        """
        values = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self._derivatives is None:
                triple = _finite_differences(self._func, values)
            else:
                triple = self._derivatives(values)
        shape = values.shape
        return tuple(  # type: ignore
            np.broadcast_to(np.asarray(x, dtype=float), shape) for x in triple
        )

    def __mul__(self, other: "RadialWeight") -> "RadialWeight":
        """
        @cc 1
        @desc product of two weights, derivatives by the product rule
        @arg other: another weight
        @ret the product weight
        """

        def derivatives(r: np.ndarray) -> Triple:
            f, f1, f2 = self.derivatives(r)
            g, g1, g2 = other.derivatives(r)
            return f * g, f1 * g + f * g1, f2 * g + 2.0 * f1 * g1 + f * g2

        return RadialWeight(
            "{}*{}".format(self.label, other.label),
            lambda r: self(r) * other(r),
            derivatives,
        )

    @classmethod
    def constant(cls, value: float = 1.0) -> "RadialWeight":
        """
        @cc 1
        @desc the constant weight
        @arg value: the constant
        @ret the weight
        """
        return cls(
            "{:g}".format(value),
            lambda r: np.full(np.shape(r), value),
            lambda r: (np.full(np.shape(r), value), np.zeros(np.shape(r)), np.zeros(np.shape(r))),
        )

    @classmethod
    def power_of(cls, base: str, exponent: float = 1.0) -> "RadialWeight":
        """
        @cc 3
        @desc g(r)^k for a catalog base g, derivatives by the chain rule
        @arg base: one of the WEIGHT_BASES names
        @arg exponent: the power k
        @ret the weight
        """
        if base not in WEIGHT_BASES:
            raise InvalidWeight("unknown weight base {!r}".format(base))
        triple = WEIGHT_BASES[base]
        k = float(exponent)

        def derivatives(r: np.ndarray) -> Triple:
            g, g1, g2 = triple(r)
            if k == 1.0:
                return g, g1, g2
            return (
                g ** k,
                k * g ** (k - 1.0) * g1,
                k * (k - 1.0) * g ** (k - 2.0) * g1 * g1 + k * g ** (k - 1.0) * g2,
            )

        shown = base if base.isalpha() else "(" + base + ")"
        label = base if k == 1.0 else "{}^{:g}".format(shown, k)
        return cls(label, lambda r: triple(r)[0] ** k, derivatives)

    @classmethod
    def from_profile(cls, profile: WarpProfile, exponent: float = 1.0) -> "RadialWeight":
        """
        @cc 1
        @desc s(r)^k for a warping profile
        @arg profile: the warping profile
        @arg exponent: the power k
        @ret the weight
        """
        k = float(exponent)

        def derivatives(r: np.ndarray) -> Triple:
            s, s1, s2 = profile.raw(r)
            return (
                s ** k,
                k * s ** (k - 1.0) * s1,
                k * (k - 1.0) * s ** (k - 2.0) * s1 * s1 + k * s ** (k - 1.0) * s2,
            )

        return cls("s^{:g}".format(k), lambda r: profile.raw(r)[0] ** k, derivatives)

    @classmethod
    def potential(cls, profile: WarpProfile) -> "RadialWeight":
        """
        @cc 1
        @desc the conformal potential c(r) = s'(r) of the field X = s d/dr
        @arg profile: the warping profile
        @ret the weight s'
        """

        def derivatives(r: np.ndarray) -> Triple:
            s, s1, s2 = profile.raw(r)
            _, _, s3 = _finite_differences(lambda x: profile.raw(x)[1], r)
            return s1, s2, s3

        return cls("s'", lambda r: profile.raw(r)[1], derivatives)

    @classmethod
    def get(cls, text: str) -> "RadialWeight":
        """
        @cc 6
        @desc get a weight by notation, e.g. "r^2", "sinh^2", "(cosh-1)^3", "sinh^1*tanh^2"
        @arg text: the notation string
        @ret the weight
        """
        text = text.replace(" ", "")
        if "*" in text:
            parts = [cls.get(x) for x in text.split("*")]
            weight = parts[0]
            for part in parts[1:]:
                weight = weight * part
            return weight
        try:
            return cls.constant(float(text))
        except ValueError:
            pass
        base, caret, exponent = text.partition("^")
        base = base.strip("()")
        return cls.power_of(base, float(exponent) if caret else 1.0)


def _sec2(r: np.ndarray) -> np.ndarray:
    return 1.0 / np.cos(r) ** 2


WEIGHT_BASES: Dict[str, Callable[[np.ndarray], Triple]] = {
    "r": lambda r: (r, np.ones_like(r), np.zeros_like(r)),
    "sinh": lambda r: (np.sinh(r), np.cosh(r), np.sinh(r)),
    "cosh": lambda r: (np.cosh(r), np.sinh(r), np.cosh(r)),
    "tanh": lambda r: (
        np.tanh(r),
        1.0 / np.cosh(r) ** 2,
        -2.0 * np.tanh(r) / np.cosh(r) ** 2,
    ),
    "cosh-1": lambda r: (np.cosh(r) - 1.0, np.sinh(r), np.cosh(r)),
    "sin": lambda r: (np.sin(r), np.cos(r), -np.sin(r)),
    "cos": lambda r: (np.cos(r), -np.sin(r), -np.cos(r)),
    "tan": lambda r: (np.tan(r), _sec2(r), 2.0 * _sec2(r) * np.tan(r)),
    "1-cos": lambda r: (1.0 - np.cos(r), np.sin(r), np.cos(r)),
    "exp": lambda r: (np.exp(r), np.exp(r), np.exp(r)),
}


class WeightPair:
    """
    @desc boundary weight a(r), its shift b = a - a(start) and volume weight c(r)
    """

    def __init__(
        self,
        a: RadialWeight,
        c: Optional[RadialWeight] = None,
        origin: float = 0.0,
        modulus: Optional[float] = None,
        span: Optional[Tuple[float, float]] = None,
        samples: int = DEFAULT_CONVEXITY_SAMPLES,
    ) -> None:
        """
        @cc 6
        @desc weight pair constructor
        @arg a: the boundary weight
        @arg c: the volume weight, None means c = 1
        @arg origin: the radius where b vanishes (the start of the radial domain)
        @arg modulus: largest admissible jump of a between neighbouring samples
        @arg span: sampled interval for the positivity and continuity checks
        @arg samples: number of check samples
        """
        self.a = a
        self.c = c
        self.origin = float(origin)
        self._a_origin = float(a(self.origin))
        if not math.isfinite(self._a_origin):
            raise InvalidWeight("a({:g}) is not finite".format(self.origin))
        if span is not None:
            grid = np.linspace(span[0], span[1], samples)
            values = np.asarray(a(grid))
            if np.any(values < 0) or not np.all(np.isfinite(values)):
                raise InvalidWeight("a must be finite and nonnegative on the sampled span")
            if modulus is not None and np.max(np.abs(np.diff(values))) > modulus:
                raise InvalidWeight(
                    "a jumps by {:.3g} > {:.3g} between samples".format(
                        float(np.max(np.abs(np.diff(values)))), modulus
                    )
                )
            if c is not None and np.any(np.asarray(c(grid[grid > 0])) <= 0):
                raise InvalidWeight("c must be positive on the sampled span")

    def __str__(self) -> str:
        """
        @cc 2
        @desc dunder str method
        @ret the string representation of this pair
        """
        return "<WeightPair a={} c={}>".format(self.a.label, self.c.label if self.c else "1")

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this pair
        """
        return self.__str__()

    @property
    def weighted(self) -> bool:
        """
        @cc 1
        @desc whether a nontrivial volume weight is present
        @ret true if c was supplied
        """
        return self.c is not None

    def b(self, r: Number) -> Number:
        """
        @cc 1
        @desc the shifted weight b(r) = a(r) - a(origin), exactly 0 at the origin
        @arg r: radius or array of radii
        @ret b values
        """
        return self.a(r) - self._a_origin

    def b_derivatives(self, r: Number) -> Triple:
        """
        @cc 1
        @desc (b, b', b'')
        @arg r: radius or array of radii
        @ret the triple
        """
        f, f1, f2 = self.a.derivatives(r)
        return f - self._a_origin, f1, f2


class Regime(SimpleNamespace):
    """
    @desc isoperimetric regime namespace class
    """


@dataclass
class RegimeReport:
    """
    @desc result of classifying a warped product by the sign of s'^2 - s s''
    """

    class Regimes:
        """
        @desc regime enum
        """

        SLICES_ISOPERIMETRIC = Regime(name="slices-isoperimetric", value=0)
        PINCHED_CURVATURE = Regime(name="pinched-curvature", value=1)
        SLICES_NOT_ISOPERIMETRIC = Regime(name="slices-not-isoperimetric", value=2)
        INDETERMINATE = Regime(name="indeterminate", value=3)

    regime: Regime
    margin_min: float
    margin_max: float
    K: Optional[float]
    lambda1: Optional[float]
    monotone: bool
    vanishing_at_zero: bool
    samples: int
    working_radius: float
    explanation: str = ""

    def to_dict(self) -> Dict[str, Any]:
        """
        @cc 1
        @desc flat dictionary for the report writers
        @ret the report as plain values
        """
        return {
            "regime": self.regime.name,
            "margin_min": self.margin_min,
            "margin_max": self.margin_max,
            "K": self.K,
            "lambda1": self.lambda1,
            "monotone": self.monotone,
            "vanishing_at_zero": self.vanishing_at_zero,
            "samples": self.samples,
            "working_radius": self.working_radius,
            "explanation": self.explanation,
        }


class WarpedSpace:
    """
    @desc the (multiply) warped product [start, end) x N_1 x ... x N_p
    """

    def __init__(
        self,
        fibers: Sequence[Tuple[WarpProfile, FiberSpec]],
        label: Optional[str] = None,
        working_radius: Optional[float] = None,
    ) -> None:
        """
        @cc 5
        @desc warped space constructor
        @arg fibers: (profile, fiber) pairs sharing one radial domain
        @arg label: display name, defaults to the profile labels
        @arg working_radius: finite radius used to sample unbounded domains
        """
        if not fibers:
            raise PreconditionError("a warped space needs at least one fiber")
        starts = {p.domain_start for p, _ in fibers}
        ends = {p.domain_end for p, _ in fibers}
        if len(starts) != 1 or len(ends) != 1:
            raise PreconditionError("all warping profiles must share one radial domain")
        self.fibers = list(fibers)
        self.label = label or "+".join(p.label for p, _ in fibers)
        self.domain_start = starts.pop()
        self.domain_end = ends.pop()
        if working_radius is None:
            working_radius = (
                self.domain_end
                if math.isfinite(self.domain_end)
                else self.domain_start + DEFAULT_WORKING_SPAN
            )
        self.working_radius = float(min(working_radius, self.domain_end))

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the string representation of this space
        """
        return "<WarpedSpace {} n={}>".format(self.label, self.n)

    def __repr__(self) -> str:
        """
        @cc 1
        @desc dunder repr method
        @ret the repr representation of this space
        """
        return self.__str__()

    @classmethod
    def model(
        cls,
        profile: Union[str, WarpProfile],
        n: int = 2,
        fiber: Optional[FiberSpec] = None,
        working_radius: Optional[float] = None,
    ) -> "WarpedSpace":
        """
        @cc 3
        @desc single-fiber model, the fiber defaults to the unit sphere S^(n-1)
        @arg profile: a profile or its catalog notation
        @arg n: the dimension of the warped product
        @arg fiber: the fiber, overrides n
        @arg working_radius: finite sampling radius for unbounded domains
        @ret the warped space
        """
        if isinstance(profile, str):
            profile = WarpProfile.get(profile)
        if fiber is None:
            fiber = FiberSpec.sphere(n - 1, 1.0)
        return cls([(profile, fiber)], profile.label, working_radius)

    @property
    def single(self) -> bool:
        """
        @cc 1
        @desc whether this is an ordinary (one fiber) warped product
        @ret true for one fiber
        """
        return len(self.fibers) == 1

    def _require_single(self) -> None:
        if not self.single:
            raise UnsupportedConfiguration("this operation needs a single-fiber space")

    @property
    def profile(self) -> WarpProfile:
        """
        @cc 1
        @desc the warping profile of a single-fiber space
        @ret the profile
        """
        self._require_single()
        return self.fibers[0][0]

    @property
    def fiber(self) -> FiberSpec:
        """
        @cc 1
        @desc the fiber of a single-fiber space
        @ret the fiber
        """
        self._require_single()
        return self.fibers[0][1]

    @property
    def m(self) -> int:
        """
        @cc 1
        @desc total fiber dimension
        @ret the sum of the fiber dimensions
        """
        return sum(f.dimension for _, f in self.fibers)

    @property
    def n(self) -> int:
        """
        @cc 1
        @desc dimension of the warped product
        @ret m + 1
        """
        return self.m + 1

    @property
    def fiber_volume(self) -> float:
        """
        @cc 1
        @desc |N| for the product fiber
        @ret the product of the fiber volumes
        """
        return float(np.prod([f.total_volume for _, f in self.fibers]))

    def area_coefficient(self, r: Number) -> Number:
        """
        @cc 2
        @desc A(r), the product of s_q(r)^m_q, so that slices have area |N| A(r)
        @arg r: radius or array of radii
        @ret A(r)
        """
        result: Any = 1.0
        for profile, fiber in self.fibers:
            result = result * profile.evaluate(r)[0] ** fiber.dimension
        return result

    def _raw_area(self, r: np.ndarray) -> np.ndarray:
        result = np.ones_like(r)
        for profile, fiber in self.fibers:
            result = result * profile.raw(r)[0] ** fiber.dimension
        return result

    def _integrand(self, weight: Optional[RadialWeight]) -> Callable[[np.ndarray], np.ndarray]:
        if weight is None:
            return self._raw_area
        return lambda r: np.asarray(weight(r)) * self._raw_area(r)

    def volume_profile(
        self,
        r: Number,
        weight: Optional[RadialWeight] = None,
        tol: float = DEFAULT_RADIAL_TOLERANCE,
    ) -> Number:
        """
        @cc 3
        @desc v(r), the integral of A from the domain start, or the weighted v~ with c A
        @arg r: radius or array of radii
        @arg weight: the volume weight c, None for c = 1
        @arg tol: relative quadrature tolerance
        @ret the (weighted) volume profile, use ball_volume() for V = |N| v
        """
        values = np.asarray(r, dtype=float)
        if not np.all((values >= self.domain_start) & (values <= self.domain_end)):
            raise DomainError("radius outside the domain of {}".format(self.label))
        integrand = self._integrand(weight)
        if values.ndim == 0:
            return integrate_radial(integrand, self.domain_start, float(values), tol)
        return integrate_radial_cumulative(integrand, self.domain_start, values, tol)

    def ball_volume(self, r: Number, weight: Optional[RadialWeight] = None) -> Number:
        """
        @cc 1
        @desc V(r) = |N| v(r), the (weighted) volume of B_r
        @arg r: radius
        @arg weight: the volume weight c
        @ret the volume
        """
        return self.fiber_volume * self.volume_profile(r, weight)

    def shell_volume(
        self, r0: float, r1: float, weight: Optional[RadialWeight] = None
    ) -> float:
        """
        @cc 2
        @desc (weighted) volume profile of the shell {r0 < r < r1}, without the |N| factor
        @arg r0: inner radius
        @arg r1: outer radius
        @arg weight: the volume weight c
        @ret v(r1) - v(r0), integrated directly over [r0, r1]
        """
        if not (self.domain_start <= r0 <= r1 <= self.domain_end):
            raise DomainError("shell [{:g}, {:g}] outside the domain".format(r0, r1))
        return integrate_radial(self._integrand(weight), r0, r1, DEFAULT_RADIAL_TOLERANCE * 1e-2)

    def invert_volume(self, u: float, weight: Optional[RadialWeight] = None) -> float:
        """
        @cc 7
        @desc the radius r with v(r) = u, by bracketed root finding on the monotone profile
        @arg u: a volume profile value
        @arg weight: the volume weight c, inverts v~ instead of v
        @ret the radius
        """
        if u < 0:
            raise DomainError("volume {:g} is negative".format(u))
        if u == 0:
            return self.domain_start

        def residual(r: float) -> float:
            return float(integrate_radial(self._integrand(weight), self.domain_start, r)) - u

        if math.isfinite(self.domain_end):
            hi = self.domain_end
            top = residual(hi)
            if top < -1e-12 * (1.0 + u):
                raise DomainError(
                    "volume {:g} exceeds the total {:g}".format(u, top + u)
                )
            if top <= 0:
                return hi
        else:
            span = max(self.working_radius - self.domain_start, 1.0)
            hi = self.domain_start + span
            top = residual(hi)
            doublings = 0
            while top < 0:
                span *= 2.0
                hi = self.domain_start + span
                top = residual(hi)
                doublings += 1
                if doublings > 60 or not math.isfinite(top):
                    raise DomainError("volume {:g} not reached on the profile".format(u))
            logger.debug("inverse volume bracket [%g, %g]", self.domain_start, hi)
        root = brentq(residual, self.domain_start, hi, xtol=1e-15, rtol=INVERSE_RTOL, maxiter=200)
        return float(root)

    def sample_radii(
        self, samples: int = DEFAULT_CONVEXITY_SAMPLES, r_max: Optional[float] = None
    ) -> np.ndarray:
        """
        @cc 2
        @desc midpoint samples of the open interval (start, r_max)
        @arg samples: the number of samples
        @arg r_max: upper end, defaults to the working radius
        @ret the sample radii
        """
        top = self.working_radius if r_max is None else min(r_max, self.working_radius)
        return self.domain_start + (top - self.domain_start) * (np.arange(samples) + 0.5) / samples

    def log_convexity_margin(self, r: Number) -> Number:
        """
        @cc 2
        @desc s s'' - s'^2 for one fiber, (log A)'' in general; convexity of A o v^-1 iff >= 0
        @arg r: radius or array of radii
        @ret the margin
        """
        if self.single:
            s, s1, s2 = self.profile.evaluate(r)
            return s * s2 - s1 * s1
        total: Any = 0.0
        for profile, fiber in self.fibers:
            s, s1, s2 = profile.evaluate(r)
            total = total + fiber.dimension * (s * s2 - s1 * s1) / (s * s)
        return total

    def secant_convexity(
        self,
        stencil: Tuple[float, float, float],
        f: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        weight: Optional[RadialWeight] = None,
    ) -> float:
        """
        @cc 3
        @desc chord gap of f o v~^-1 on a three point stencil, >= 0 where convex
        @arg stencil: radii r_left < r_mid < r_right
        @arg f: the radial function, A by default
        @arg weight: the volume weight c
        @ret chord value at u(r_mid) minus f(r_mid)
        """
        radii = np.asarray(sorted(stencil), dtype=float)
        u = np.asarray(self.volume_profile(radii, weight))
        values = np.asarray(self._raw_area(radii) if f is None else f(radii), dtype=float)
        t = (u[1] - u[0]) / (u[2] - u[0])
        return float(values[0] + t * (values[2] - values[0]) - values[1])

    def sampled_convexity(
        self,
        f: Callable[[np.ndarray], np.ndarray],
        r_max: Optional[float] = None,
        weight: Optional[RadialWeight] = None,
        samples: int = DEFAULT_CONVEXITY_SAMPLES,
    ) -> float:
        """
        @cc 1
        @desc smallest normalized chord gap of f o v~^-1 over consecutive sample triples
        @arg f: the radial function
        @arg r_max: upper end of the sampled range
        @arg weight: the volume weight c
        @arg samples: sampling density
        @ret the minimum gap, nonnegative (up to round-off) when f o v~^-1 is convex
        """
        radii = self.sample_radii(samples, r_max)
        u = np.asarray(self.volume_profile(radii, weight))
        values = np.asarray(f(radii), dtype=float)
        t = (u[1:-1] - u[:-2]) / (u[2:] - u[:-2])
        gaps = values[:-2] + t * (values[2:] - values[:-2]) - values[1:-1]
        scale = 1.0 + np.max(np.abs(values))
        return float(np.min(gaps) / scale)

    def sampled_monotone(
        self,
        f: Callable[[np.ndarray], np.ndarray],
        r_max: Optional[float] = None,
        samples: int = DEFAULT_CONVEXITY_SAMPLES,
    ) -> bool:
        """
        @cc 1
        @desc check that f is non-decreasing on the sampled range
        @arg f: the radial function
        @arg r_max: upper end of the sampled range
        @arg samples: sampling density
        @ret true if no sampled decrease exceeds round-off
        """
        values = np.asarray(f(self.sample_radii(samples, r_max)), dtype=float)
        scale = 1.0 + np.max(np.abs(values))
        return bool(np.min(np.diff(values)) >= -CONVEXITY_TOLERANCE * scale)

    def weighted_convexity_margin(self, weights: WeightPair, r: Number) -> Number:
        """
        @cc 1
        @desc s^2 b'' + m s s' b' - m b (s'^2 - s s''); >= 0 iff (b A) o v^-1 is convex at r
        @arg weights: the weight pair providing b
        @arg r: radius or array of radii
        @ret the margin
        """
        s, s1, s2 = self.profile.evaluate(r)
        b, b1, b2 = weights.b_derivatives(r)
        m = self.m
        result = s * s * b2 + m * s * s1 * b1 - m * b * (s1 * s1 - s * s2)
        return float(result) if np.ndim(result) == 0 else result

    def classify_regime(
        self, K: Optional[float] = None, samples: int = DEFAULT_CONVEXITY_SAMPLES
    ) -> RegimeReport:
        """
        @cc 12
        @desc classify by the sampled sign of s'^2 - s s'' against the fiber curvature bound K
        @arg K: curvature bound, defaults to the fiber's constant curvature when realized
        @arg samples: sampling density on (start, working radius)
        @ret the regime report
        """
        profile, fiber = self.profile, self.fiber
        radii = self.sample_radii(samples)
        s, s1, s2 = profile.evaluate(radii)
        margin = s1 * s1 - s * s2
        lo, hi = float(np.min(margin)), float(np.max(margin))
        tol = CONVEXITY_TOLERANCE * (1.0 + max(abs(lo), abs(hi)))
        if K is None:
            K = fiber.curvature
        regimes = RegimeReport.Regimes
        regime, explanation = regimes.INDETERMINATE, ""
        if hi <= tol:
            regime = regimes.SLICES_ISOPERIMETRIC
            explanation = "s'^2 - s s'' <= 0 on every sample"
        elif K is None:
            explanation = "s'^2 - s s'' > 0 somewhere and no curvature bound K is known"
        elif lo >= -tol and hi <= K + tol:
            ricci = fiber.ricci_bound_holds(K)
            if ricci:
                regime = regimes.PINCHED_CURVATURE
                explanation = "0 <= s'^2 - s s'' <= K with Ric_N >= (m - 1) K"
            elif ricci is None:
                explanation = "0 <= s'^2 - s s'' <= K but the fiber Ricci bound is unknown"
            else:
                explanation = "0 <= s'^2 - s s'' <= K but Ric_N < (m - 1) K"
        elif hi > K + tol:
            if fiber.lambda1 is None:
                explanation = "s'^2 - s s'' > K but the fiber lambda1 is unknown"
            elif fiber.lambda1 <= self.m * K + tol:
                regime = regimes.SLICES_NOT_ISOPERIMETRIC
                explanation = "s'^2 - s s'' > K somewhere and lambda1 <= m K"
            else:
                explanation = "s'^2 - s s'' > K but lambda1 > m K"
        else:
            explanation = "s'^2 - s s'' changes sign"
        monotone = bool(np.min(s1) >= -tol)
        logger.debug("classified %s as %s (%s)", self.label, regime.name, explanation)
        return RegimeReport(
            regime=regime,
            margin_min=lo,
            margin_max=hi,
            K=K,
            lambda1=fiber.lambda1,
            monotone=monotone,
            vanishing_at_zero=profile.vanishing_at_zero,
            samples=samples,
            working_radius=self.working_radius,
            explanation=explanation,
        )


def eval_profile(profile: WarpProfile, r: float) -> Tuple[float, float, float]:
    """
    @cc 1
    @desc (s, s', s'') at a single radius, with the domain check
    @arg profile: the warping profile
    @arg r: the radius
    @ret the triple of floats
    """
    s, s1, s2 = profile.evaluate(float(r))
    return float(s), float(s1), float(s2)


__all__ = [
    "FiberSpec",
    "RadialWeight",
    "Realization",
    "Regime",
    "RegimeReport",
    "WarpProfile",
    "WarpedSpace",
    "WeightPair",
    "eval_profile",
    "parse_notation",
    "round_sphere_volume",
    "unit_ball_volume",
]
