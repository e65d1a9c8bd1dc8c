"""Objective oracles over box programs.

An objective oracle exposes three views of a continuously differentiable
function: exact values, exact gradients, and the exact univariate
restriction of the directional derivative along an axis direction,

    g(mu) = grad f(x + mu*d)^T d,

which the engine's line search consumes.  Everything is computed in exact
rational arithmetic; there is no floating point anywhere.

The centerpiece is :class:`LowerBoundPolynomial`, a family of degree-n
polynomials built from two coupled recursions.  On the vertices of the
unit cube its values are exactly the integers ``0 .. 2^n - 1``, each
attained once, and every non-optimal vertex has a unique improving edge;
optimizing it over the cube forces vertex-walking methods through all
``2^n`` vertices.  The recursions:

    a_{n+1}(x) = 0
    a_i(x)     = x_i + (1 - 2 x_i) a_{i+1}(x)
    b_i(x)     = 2^i (x_i - x_i^2)(1 - x_{i-1} + sum_{j<=i-2} x_j),  x_0 := 1

    F_n(x) = sum_{i=1..n} (2^{i-1} a_i(x) - b_i(x))

``b_1`` is identically zero by the ``x_0 := 1`` convention, and every
``b_i`` vanishes on {0,1}^n, so vertex values are binary numbers with
digits ``a_i``.

The recursion evaluators are generic over the scalar ring: rationals give
values, dual numbers give derivatives, univariate polynomials give edge
restrictions, and multivariate polynomials give the expanded monomial form.
"""

from __future__ import annotations

from typing import Protocol, Sequence, runtime_checkable

from .boxes import AxisDirection, Point, as_point
from .errors import DimensionMismatchError, NotAVertexError
from .polynomials import MultiPoly, UniPoly
from .scalars import Rational, as_rational


def _evaluate_value(coords: Sequence):
    """One pass of the defining recursion, generic over the scalar ring."""
    n = len(coords)
    alphas = [0] * n  # alphas[i-1] holds a_i; a_{n+1} = 0
    acc = 0
    for i in range(n - 1, -1, -1):
        acc = coords[i] + (1 - 2 * coords[i]) * acc
        alphas[i] = acc
    total = 0
    prefix = 0  # sum_{j <= i-2} x_j, maintained incrementally
    prev = 1    # x_{i-1}, with x_0 := 1
    for i in range(1, n + 1):
        xi = coords[i - 1]
        w = xi - xi * xi
        total = total + (1 << (i - 1)) * alphas[i - 1] - (1 << i) * w * (1 - prev + prefix)
        if i >= 2:
            prefix = prefix + prev
        prev = xi
    return total


def _partial_forward(coords: Sequence, k: int):
    """Forward-mode derivative of the recursion with respect to ``x_k``.

    The dual components are carried in locals rather than boxed pairs; the
    propagation rules are identical to dual-number arithmetic.  ``a_i`` has
    zero derivative for ``i > k`` (it reads only ``x_j`` with ``j >= i``),
    so the value-only suffix sweep comes first and the derivative turns on
    at ``i = k``.  For the second recursion only the terms ``i >= k`` see
    ``x_k``: the ``i = k`` term through its quadratic factor, the
    ``i = k+1`` term through ``-x_k``, and later terms through the prefix
    sum.
    """
    n = len(coords)
    a = 0
    for i in range(n - 1, k - 1, -1):
        xi = coords[i]
        a = xi + (1 - 2 * xi) * a
    xk = coords[k - 1]
    da = 1 - 2 * a
    acc = (1 << (k - 1)) * da
    for i in range(k - 2, -1, -1):
        xi = coords[i]
        da = (1 - 2 * xi) * da
        acc += (1 << i) * da
    if k >= 2:
        s_k = 1 - coords[k - 2]
        for j in range(k - 2):
            s_k += coords[j]
    else:
        s_k = 0  # x_0 := 1 makes (1 - x_0) vanish and the sum empty
    db = (1 << k) * (1 - 2 * xk) * s_k
    if k < n:
        xj = coords[k]
        db -= (1 << (k + 1)) * (xj - xj * xj)
    for i in range(k + 2, n + 1):
        xj = coords[i - 1]
        w = xj - xj * xj
        if w != 0:
            db += (1 << i) * w
    return acc - db


def alpha(n: int, i: int, x: Sequence) -> Rational:
    """The value ``a_{n,i}(x)`` of the first recursion (``a_{n,n+1} = 0``).

    On {0,1}^n the result is the XOR of the bits ``x_i .. x_n``, hence in
    {0, 1}.
    """
    if not 1 <= i <= n + 1:
        raise ValueError(f"index i={i} out of range 1..{n + 1}")
    if len(x) != n:
        raise DimensionMismatchError(f"point length {len(x)} != n {n}")
    acc = 0
    for j in range(n - 1, i - 2, -1):
        xj = x[j]
        acc = xj + (1 - 2 * xj) * acc
    return as_rational(acc)


def beta(n: int, i: int, x: Sequence) -> Rational:
    """The value ``b_{n,i}(x)`` of the second recursion.

    Zero whenever ``x_i`` is 0 or 1, and identically zero for ``i = 1``
    because of the ``x_0 := 1`` convention.
    """
    if not 1 <= i <= n:
        raise ValueError(f"index i={i} out of range 1..{n}")
    if len(x) != n:
        raise DimensionMismatchError(f"point length {len(x)} != n {n}")
    xi = x[i - 1]
    prev = x[i - 2] if i >= 2 else 1
    s = 1 - prev
    for j in range(i - 2):
        s += x[j]
    return as_rational((1 << i) * (xi - xi * xi) * s)


def f_value(n: int, x: Sequence) -> Rational:
    """The defining sum ``sum_i 2^{i-1} a_i(x) - b_i(x)``, exactly."""
    if len(x) != n:
        raise DimensionMismatchError(f"point length {len(x)} != n {n}")
    return as_rational(_evaluate_value(tuple(x)))


def _require_unit_vertex(x: Sequence) -> tuple:
    coords = tuple(x)
    if any(c != 0 and c != 1 for c in coords):
        raise NotAVertexError(f"{coords} is not a 0/1 vertex")
    return tuple(int(c) for c in coords)


def partial_closed_form(n: int, k: int, x: Sequence) -> Rational:
    """Closed form of the k-th partial derivative on 0/1 vertices:

        (1 - 2 a_{k+1}) * sum_{i=1..k} 2^{i-1} prod_{j=i..k-1} (1 - 2 x_j)
        - 2^k (1 - 2 x_k) (1 - x_{k-1} + sum_{i<=k-2} x_i),   x_0 := 1.

    For ``k = 1`` this collapses to ``1 - 2 a_2``.  The form is only valid
    on vertices; other points are rejected.
    """
    if not 1 <= k <= n:
        raise ValueError(f"coordinate k={k} out of range 1..{n}")
    bits = _require_unit_vertex(x)
    if len(bits) != n:
        raise DimensionMismatchError(f"point length {len(bits)} != n {n}")
    a_next = 0
    for j in range(n - 1, k - 1, -1):
        a_next = bits[j] + (1 - 2 * bits[j]) * a_next
    t = 0  # T_i = sum_{m=1..i} 2^{m-1} prod_{j=m..i-1}(1-2x_j), built forward
    for i in range(1, k + 1):
        if i == 1:
            t = 1
        else:
            t = (1 - 2 * bits[i - 2]) * t + (1 << (i - 1))
    if k >= 2:
        s = 1 - bits[k - 2] + sum(bits[j] for j in range(k - 2))
    else:
        s = 0
    return as_rational((1 - 2 * a_next) * t - (1 << k) * (1 - 2 * bits[k - 1]) * s)


@runtime_checkable
class ObjectiveOracle(Protocol):
    """What the engine needs from an objective: exact values, exact
    gradients, and exact edge restrictions.  All operations are pure."""

    n: int

    def value(self, x: Point) -> Rational: ...

    def gradient(self, x: Point) -> tuple: ...

    def edge_restriction(self, x: Point, d: AxisDirection) -> UniPoly: ...


def _line_coords(x: Point, d: AxisDirection) -> tuple:
    """Coordinates of ``x + mu*d`` as scalars, with coordinate ``d.coord``
    the degree-1 polynomial ``x_k + component * mu``."""
    k = d.coord - 1
    return x[:k] + (UniPoly((x[k], d.component)),) + x[k + 1:]


def _edge_value_coeffs(coords: Sequence, k: int, s) -> tuple:
    """Coefficients (h0, h1, h2) of ``h(mu) = F(x + mu*s*e_k)``.

    This is the recursion evaluated with polynomial-valued scalars, with
    the polynomials unboxed to coefficient triples: only coordinate ``k``
    depends on ``mu``, and the recursion never multiplies two
    mu-dependent subexpressions (the first recursion folds ``x_k`` in
    exactly once against a mu-free tail; each product term contains
    ``x_k`` in at most one factor), so every intermediate is affine and
    the total has degree at most 2 -- quadratic only through the
    ``(x_k - x_k^2)`` factor.
    """
    n = len(coords)
    a = 0
    suffix_total = 0  # sum of 2^{i-1} a_i over i > k (all mu-free)
    for i in range(n - 1, k - 1, -1):
        xi = coords[i]
        a = xi + (1 - 2 * xi) * a
        suffix_total += (1 << i) * a
    xk = coords[k - 1]
    a0 = xk + (1 - 2 * xk) * a  # a_k = a0 + a1*mu
    a1 = s * (1 - 2 * a)
    h0 = suffix_total + (1 << (k - 1)) * a0
    h1 = (1 << (k - 1)) * a1
    h2 = 0
    for i in range(k - 2, -1, -1):  # a_i for i < k stays affine
        xi = coords[i]
        c = 1 - 2 * xi
        a0 = xi + c * a0
        a1 = c * a1
        h0 += (1 << i) * a0
        h1 += (1 << i) * a1
    prefix = 0  # sum_{j <= i-2} x_j, mu-free part (x_k contributes xk)
    prev = 1    # x_{i-1} with x_0 := 1, mu-free part
    for i in range(1, n + 1):
        xi = coords[i - 1]
        scale = 1 << i
        if i == k:
            s_k = 1 - prev + prefix  # mu-free: it reads x_j for j < k only
            if s_k != 0:
                h0 -= scale * (xk - xk * xk) * s_k
                h1 -= scale * s * (1 - 2 * xk) * s_k
                h2 += scale * s * s * s_k
        else:
            w = xi - xi * xi
            if w != 0:
                h0 -= scale * w * (1 - prev + prefix)
                if i == k + 1:      # -x_k(mu) contributes +s*mu to -s_i
                    h1 += scale * w * s
                elif i >= k + 2:    # x_k(mu) in the prefix contributes -s*mu
                    h1 -= scale * w * s
        if i >= 2:
            prefix = prefix + prev
        prev = xi
    return h0, h1, h2


class LowerBoundPolynomial:
    """The degree-n objective family defined by the module recursions.

    Gradients are forward-mode derivatives of the recursion (coordinate by
    coordinate); edge restrictions substitute the parametrized edge into
    the recursion with polynomial-valued scalars and differentiate the
    resulting univariate polynomial.  Results are memoized per instance --
    the oracle is pure, so cached replies are indistinguishable from fresh
    ones, and repeated runs (one per pivot rule) revisit the same vertices.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.n = n
        self._grad_cache: dict = {}
        self._edge_cache: dict = {}

    def _check(self, x: Sequence) -> None:
        if len(x) != self.n:
            raise DimensionMismatchError(f"point length {len(x)} != n {self.n}")

    def value(self, x: Point) -> Rational:
        self._check(x)
        return as_rational(_evaluate_value(x))

    def partial(self, x: Point, k: int) -> Rational:
        """The k-th partial derivative at any point (not just vertices)."""
        self._check(x)
        if not 1 <= k <= self.n:
            raise ValueError(f"coordinate k={k} out of range 1..{self.n}")
        return as_rational(_partial_forward(x, k))

    def gradient(self, x: Point) -> tuple:
        self._check(x)
        x = tuple(x)
        cached = self._grad_cache.get(x)
        if cached is None:
            cached = tuple(
                as_rational(_partial_forward(x, k)) for k in range(1, self.n + 1)
            )
            self._grad_cache[x] = cached
        return cached

    def edge_restriction(self, x: Point, d: AxisDirection) -> UniPoly:
        self._check(x)
        key = (tuple(x), d.coord, d.component)
        cached = self._edge_cache.get(key)
        if cached is None:
            _, h1, h2 = _edge_value_coeffs(x, d.coord, d.component)
            cached = UniPoly._make((h1, 2 * h2))
            self._edge_cache[key] = cached
        return cached

    def expand(self) -> MultiPoly:
        """Fully expanded monomial form, obtained by evaluating the
        recursion over the multivariate polynomial ring."""
        variables = tuple(MultiPoly.variable(self.n, j) for j in range(1, self.n + 1))
        result = _evaluate_value(variables)
        if not isinstance(result, MultiPoly):
            result = MultiPoly.constant(self.n, result)
        return result


def expand(n: int) -> MultiPoly:
    """Expanded monomial form of the degree-n family member.

    Total degree is ``n`` for every ``n != 2`` and 3 for ``n = 2``.
    """
    return LowerBoundPolynomial(n).expand()


class LinearObjective:
    """The linear objective ``c^T x``: constant gradient, degree-0 edge
    restrictions."""

    def __init__(self, c: Sequence):
        self.c = as_point(c)
        if not self.c:
            raise ValueError("coefficient vector must be nonempty")
        self.n = len(self.c)

    def _check(self, x: Sequence) -> None:
        if len(x) != self.n:
            raise DimensionMismatchError(f"point length {len(x)} != n {self.n}")

    def value(self, x: Point) -> Rational:
        self._check(x)
        return as_rational(sum(ci * xi for ci, xi in zip(self.c, x)))

    def gradient(self, x: Point) -> tuple:
        self._check(x)
        return self.c

    def edge_restriction(self, x: Point, d: AxisDirection) -> UniPoly:
        self._check(x)
        return UniPoly((self.c[d.coord - 1] * d.component,))


class PaddedObjective:
    """An oracle on ``n`` dimensions that reads only the first ``inner.n``
    coordinates; the extra dimensions never affect values or gradients."""

    def __init__(self, inner, n: int):
        if n < inner.n:
            raise DimensionMismatchError(
                f"cannot pad a {inner.n}-dimensional objective into {n} dimensions"
            )
        self.inner = inner
        self.n = n

    def _check(self, x: Sequence) -> None:
        if len(x) != self.n:
            raise DimensionMismatchError(f"point length {len(x)} != n {self.n}")

    def value(self, x: Point) -> Rational:
        self._check(x)
        return self.inner.value(tuple(x[: self.inner.n]))

    def gradient(self, x: Point) -> tuple:
        self._check(x)
        head = self.inner.gradient(tuple(x[: self.inner.n]))
        return head + (0,) * (self.n - self.inner.n)

    def edge_restriction(self, x: Point, d: AxisDirection) -> UniPoly:
        self._check(x)
        if d.coord <= self.inner.n:
            return self.inner.edge_restriction(tuple(x[: self.inner.n]), d)
        return UniPoly.zero()


def pad(inner, n: int) -> PaddedObjective:
    """Lift an oracle to ``n >= inner.n`` dimensions by ignoring the tail."""
    return PaddedObjective(inner, n)


class MultiPolyObjective:
    """Oracle view of an explicit multivariate polynomial.

    Gradients come from symbolic partial derivatives computed once at
    construction; edge restrictions substitute the parametrized edge and
    differentiate.  Used as an independent implementation for cross-checks
    and for running the engine on arbitrary polynomial objectives.
    """

    def __init__(self, poly: MultiPoly):
        self.poly = poly
        self.n = poly.nvars
        if self.n < 1:
            raise ValueError("objective needs at least one variable")
        self._partials = tuple(poly.partial(k) for k in range(1, self.n + 1))

    def _check(self, x: Sequence) -> None:
        if len(x) != self.n:
            raise DimensionMismatchError(f"point length {len(x)} != n {self.n}")

    def value(self, x: Point) -> Rational:
        self._check(x)
        return as_rational(self.poly.eval(x))

    def gradient(self, x: Point) -> tuple:
        self._check(x)
        return tuple(as_rational(p.eval(x)) for p in self._partials)

    def edge_restriction(self, x: Point, d: AxisDirection) -> UniPoly:
        self._check(x)
        restricted = self.poly.eval(_line_coords(tuple(x), d))
        if not isinstance(restricted, UniPoly):
            restricted = UniPoly((restricted,))
        return restricted.derivative()
