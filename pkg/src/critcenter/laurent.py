"""Exact Laurent series arithmetic over the rationals.

Scalars are `fractions.Fraction`, so every computation in the package is
exact; there is no floating point anywhere.  A LaurentElement is a finite
rational combination of integer powers of t, optionally truncated: when
``precision`` is set to p, coefficients of t^k for k >= p are unknown and the
element stands for its stored part plus O(t^p).  Exact (untruncated) elements
have ``precision is None``.

The valuation of the exact zero element is the sentinel ``INFINITY``, which
compares greater than every integer.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    PrecisionExhaustedError,
    UndeterminedCoefficientError,
    UndeterminedResidueError,
    UndeterminedValuationError,
    ZeroDivisorError,
)

Scalar = Fraction


def scalar_from_str(text):
    """Parse "num/den" (or a bare integer string) into a Fraction."""
    return Fraction(str(text))


def scalar_to_str(value):
    return str(Fraction(value))


class _Infinity:
    """Sentinel for the valuation of zero; larger than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __neg__(self):
        raise ArithmeticError("negative infinity is not modelled")

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def _min_prec(p, q):
    if p is None:
        return q
    if q is None:
        return p
    return min(p, q)


class LaurentElement:
    """A Laurent polynomial/truncated series with Fraction coefficients.

    Stored as a map exponent -> nonzero coefficient.  When ``precision`` is
    set, no stored exponent reaches it.
    """

    __slots__ = ("_coeff", "precision")

    def __init__(self, coeff=None, precision=None):
        table = {}
        if coeff:
            for k, c in (coeff.items() if isinstance(coeff, dict) else coeff):
                c = Fraction(c)
                if c:
                    k = int(k)
                    if precision is None or k < precision:
                        table[k] = table.get(k, Fraction(0)) + c
                        if not table[k]:
                            del table[k]
        self._coeff = table
        self.precision = precision

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, precision=None):
        return cls({}, precision)

    @classmethod
    def one(cls):
        return cls({0: Fraction(1)})

    @classmethod
    def monomial(cls, exponent, coefficient=1):
        return cls({int(exponent): Fraction(coefficient)})

    @classmethod
    def constant(cls, value):
        return cls({0: Fraction(value)})

    # -- basic queries -----------------------------------------------------

    def items(self):
        return sorted(self._coeff.items())

    def is_zero(self):
        """True when the element is exactly zero (not merely zero mod t^p)."""
        return not self._coeff and self.precision is None

    def is_zero_mod_precision(self):
        return not self._coeff

    def coefficient(self, k):
        """The coefficient of t^k; errors if k is hidden by the precision."""
        if self.precision is not None and k >= self.precision:
            raise UndeterminedCoefficientError(
                f"coefficient of t^{k} not determined at precision O(t^{self.precision})"
            )
        return self._coeff.get(k, Fraction(0))

    def residue(self):
        """The coefficient of t^-1."""
        if self.precision is not None and self.precision <= -1:
            raise UndeterminedResidueError(
                f"residue not determined at precision O(t^{self.precision})"
            )
        return self._coeff.get(-1, Fraction(0))

    def valuation(self):
        """Smallest exponent with nonzero coefficient; INFINITY for zero."""
        if self._coeff:
            return min(self._coeff)
        if self.precision is not None:
            raise UndeterminedValuationError(
                f"element is zero up to O(t^{self.precision}); valuation undetermined"
            )
        return INFINITY

    def _lower_bound(self):
        # Smallest exponent that could carry a nonzero coefficient.
        if self._coeff:
            return min(self._coeff)
        return self.precision  # None for exact zero

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentElement):
            return NotImplemented
        prec = _min_prec(self.precision, other.precision)
        table = dict(self._coeff)
        for k, c in other._coeff.items():
            table[k] = table.get(k, Fraction(0)) + c
        return LaurentElement(table, prec)

    def __neg__(self):
        return LaurentElement({k: -c for k, c in self._coeff.items()}, self.precision)

    def __sub__(self, other):
        if not isinstance(other, LaurentElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentElement):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentElement.zero()
        prec = None
        if other.precision is not None:
            lb = self._lower_bound()
            prec = _min_prec(prec, None if lb is None else lb + other.precision)
        if self.precision is not None:
            lb = other._lower_bound()
            prec = _min_prec(prec, None if lb is None else lb + self.precision)
        table = {}
        for k1, c1 in self._coeff.items():
            for k2, c2 in other._coeff.items():
                k = k1 + k2
                if prec is not None and k >= prec:
                    continue
                table[k] = table.get(k, Fraction(0)) + c1 * c2
        return LaurentElement(table, prec)

    __rmul__ = __mul__

    def scale(self, scalar):
        scalar = Fraction(scalar)
        if not scalar:
            return LaurentElement.zero()
        return LaurentElement(
            {k: c * scalar for k, c in self._coeff.items()}, self.precision
        )

    def __pow__(self, n):
        if n < 0:
            raise ValueError("use invert() for negative powers")
        out = LaurentElement.one()
        for _ in range(n):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------

    def derivative(self):
        """Termwise d/dt; the precision bound drops by one."""
        prec = None if self.precision is None else self.precision - 1
        return LaurentElement(
            {k - 1: k * c for k, c in self._coeff.items() if k != 0}, prec
        )

    def invert(self, order):
        """A series b with self*b = 1 + O(t^order); b has valuation -v(self).

        A single stored monomial inverts exactly.  Otherwise the result is
        precision-tracked, with the geometric-series tail truncated at the
        requested order.
        """
        if self.is_zero():
            raise ZeroDivisorError("cannot invert the zero series")
        v = self.valuation()  # raises UndeterminedValuationError on O(t^p) zero
        c0 = self._coeff[v]
        if len(self._coeff) == 1 and self.precision is None:
            return LaurentElement.monomial(-v, Fraction(1) / c0)
        effective = order
        if self.precision is not None:
            effective = min(effective, self.precision - v)
        if effective <= 0:
            raise PrecisionExhaustedError(
                f"cannot invert to order {order} with input precision O(t^{self.precision})"
            )
        # u = self / (c0 t^v) - 1 has valuation >= 1
        u = LaurentElement(
            {k - v: c / c0 for k, c in self._coeff.items() if k != v},
            None if self.precision is None else self.precision - v,
        )
        geo = LaurentElement.one()
        power = LaurentElement.one()
        k = 1
        while True:
            power = (power * u).truncate(effective)
            if power.is_zero_mod_precision():
                break
            geo = geo + power.scale((-1) ** (k % 2))
            k += 1
        geo = geo.truncate(effective)
        return LaurentElement(
            {k - v: c / c0 for k, c in geo._coeff.items()}, effective - v
        )

    def truncate(self, precision):
        return LaurentElement(self._coeff, _min_prec(self.precision, precision))

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentElement):
            return NotImplemented
        return self._coeff == other._coeff and self.precision == other.precision

    def __hash__(self):
        return hash((tuple(sorted(self._coeff.items())), self.precision))

    def agrees_with(self, other, upto=None):
        """Equality of all coefficients determined on both sides (below upto)."""
        bound = _min_prec(self.precision, other.precision)
        bound = _min_prec(bound, upto)
        exps = set(self._coeff) | set(other._coeff)
        for k in exps:
            if bound is not None and k >= bound:
                continue
            if self._coeff.get(k, Fraction(0)) != other._coeff.get(k, Fraction(0)):
                return False
        return True

    # -- presentation ------------------------------------------------------

    def __repr__(self):
        return f"LaurentElement({self!s})"

    def __str__(self):
        parts = []
        for k, c in self.items():
            if k == 0:
                parts.append(str(c))
            else:
                base = "t" if k == 1 else f"t^{k}"
                if c == 1:
                    parts.append(base)
                elif c == -1:
                    parts.append(f"-{base}")
                else:
                    parts.append(f"{c}*{base}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        if self.precision is not None:
            tail = f"O(t^{self.precision})"
            body = tail if body == "0" else f"{body} + {tail}"
        return body

    # -- serialization -----------------------------------------------------

    def to_json(self):
        data = {"terms": [[k, scalar_to_str(c)] for k, c in self.items()]}
        if self.precision is not None:
            data["precision"] = self.precision
        return data

    @classmethod
    def from_json(cls, data):
        from .errors import ValidationError

        if isinstance(data, list):
            data = {"terms": data}
        if not isinstance(data, dict) or "terms" not in data:
            raise ValidationError(f"not a Laurent element: {data!r}")
        try:
            terms = [(int(k), scalar_from_str(c)) for k, c in data["terms"]]
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad Laurent terms: {exc}") from exc
        prec = data.get("precision")
        return cls(terms, None if prec is None else int(prec))
