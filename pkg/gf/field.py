# field.py
# Exact arithmetic in GF(p^m) with a canonical representation and a text codec
#
# Elements are galois FieldArray scalars. Their integer value is the
# polynomial-basis coordinate vector read in base p, so two elements are
# equal iff their coordinate lists are equal.

import logging
import re
from dataclasses import dataclass
from functools import lru_cache

import galois
import numpy as np

from lab_errors import FieldError

log = logging.getLogger(__name__)

# ---------------- Configuration ----------------
MAX_FIELD_ORDER = 2 ** 16    # validation cap on q = p^m
POWER_TOKEN = re.compile(r"g\^(\d+)")
DESCRIPTION = re.compile(r"(\d+)(?:\^(\d+))?(?:/(\d+(?:,\d+)*))?")

# A field element is a 0-d FieldArray; kept as an alias for signatures.
Element = galois.FieldArray


# ---------------- Field description ----------------
@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) with a verified modulus and a designated primitive element."""

    p: int
    m: int
    modulus: tuple          # ascending coefficients, monic, length m + 1
    gf: type                # the galois FieldArray class doing the arithmetic
    generator: int          # integer form of the primitive element

    @property
    def q(self):
        return self.p ** self.m

    @property
    def gen(self):
        return self.gf(self.generator)

    @property
    def zero(self):
        return self.gf(0)

    @property
    def one(self):
        return self.gf(1)

    @property
    def description(self):
        return describe_field(self)

    def __call__(self, value):
        """Coerce an int, a list of ints or an element of this field."""
        if isinstance(value, galois.FieldArray):
            self.require(value)
            return value
        return self.gf(value)

    def vector(self, items):
        """Build a 1-d array from ints and/or elements of this field."""
        values = []
        for item in items:
            if isinstance(item, galois.FieldArray):
                self.require(item)
            values.append(int(item))
        return self.gf(values)

    def require(self, *arrays):
        """Raise FieldError unless every array lives in this field."""
        for array in arrays:
            if type(array) is not self.gf:
                raise FieldError(f"operand belongs to {type(array).name}, expected {self.gf.name}")

    def units(self):
        """Nonzero elements in generator-power order g^0, g^1, ..., g^(q-2)."""
        return self.gen ** np.arange(self.q - 1)

    def __repr__(self):
        return f"FieldSpec({self.description})"


def make_field(p, m=1, modulus=None):
    """Build GF(p^m). Default modulus is the Conway polynomial."""
    key = None if modulus is None else tuple(int(c) for c in modulus)
    return _build_field(int(p), int(m), key)


@lru_cache(maxsize=None)
def _build_field(p, m, modulus):
    if p < 2 or not galois.is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError(f"extension degree must be >= 1, got {m}")
    if p ** m > MAX_FIELD_ORDER:
        raise FieldError(f"field order {p}^{m} exceeds cap {MAX_FIELD_ORDER}")

    if modulus is None:
        modulus = _default_modulus(p, m)
    else:
        _check_modulus(p, m, modulus)
        if m == 1 and modulus != (0, 1):
            raise FieldError(f"prime fields take the modulus x = (0, 1), got {modulus}")

    if m == 1:
        gf = galois.GF(p)
    else:
        poly = galois.Poly(list(reversed(modulus)), field=galois.GF(p))
        if not poly.is_irreducible():
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        gf = galois.GF(p ** m, irreducible_poly=poly)

    generator = gf.primitive_element
    if int(generator.multiplicative_order()) != p ** m - 1:
        raise FieldError(f"generator {int(generator)} is not primitive in GF({p}^{m})")

    log.debug("built GF(%d^%d) modulus=%s generator=%d", p, m, modulus, int(generator))
    return FieldSpec(p=p, m=m, modulus=tuple(modulus), gf=gf, generator=int(generator))


def spec_of(gf):
    """The FieldSpec behind a galois FieldArray class."""
    if gf.degree == 1:
        return make_field(gf.characteristic)
    default = make_field(gf.characteristic, gf.degree)
    if default.gf is gf:
        return default
    modulus = tuple(int(c) for c in gf.irreducible_poly.coeffs[::-1])
    return make_field(gf.characteristic, gf.degree, modulus)


def _default_modulus(p, m):
    if m == 1:
        return (0, 1)
    try:
        poly = galois.conway_poly(p, m)
    except LookupError:
        log.warning("⚠️  no Conway polynomial for GF(%d^%d), using the minimal irreducible one", p, m)
        poly = galois.irreducible_poly(p, m, method="min")
    return tuple(int(c) for c in poly.coeffs[::-1])


def _check_modulus(p, m, modulus):
    if len(modulus) != m + 1:
        raise FieldError(f"modulus needs {m + 1} coefficients, got {len(modulus)}")
    if any(not 0 <= c < p for c in modulus):
        raise FieldError(f"modulus coefficients must lie in [0, {p})")
    if modulus[-1] != 1:
        raise FieldError("modulus must be monic")


# ---------------- Field description strings ----------------
def describe_field(F):
    """'p' for prime fields, 'p^m/c0,...,cm' otherwise."""
    if F.m == 1:
        return str(F.p)
    return f"{F.p}^{F.m}/" + ",".join(str(c) for c in F.modulus)


def parse_field_description(text):
    """Inverse of describe_field; also accepts 'p^m' and a bare prime power 'q'."""
    match = DESCRIPTION.fullmatch(text.strip())
    if match is None:
        raise FieldError(f"malformed field description {text!r}")
    base, degree, coeffs = match.groups()
    base = int(base)
    modulus = None if coeffs is None else [int(c) for c in coeffs.split(",")]

    if degree is not None:
        return make_field(base, int(degree), modulus)
    if base >= 2 and galois.is_prime(base):
        return make_field(base, 1, modulus)
    if base >= 2 and galois.is_prime_power(base):
        primes, exponents = galois.factors(base)
        return make_field(primes[0], exponents[0], modulus)
    raise FieldError(f"{base} is not a prime power")


# ---------------- Arithmetic ----------------
def arith(op, *operands):
    """add / neg / mul / inv / pow on field elements; pow takes an int exponent."""
    if op == "add":
        a, b = operands
        _same_field(a, b)
        return a + b
    if op == "neg":
        (a,) = operands
        return -a
    if op == "mul":
        a, b = operands
        _same_field(a, b)
        return a * b
    if op == "inv":
        (a,) = operands
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {type(a).name}")
        return np.reciprocal(a)
    if op == "pow":
        a, exponent = operands
        exponent = int(exponent)
        if exponent < 0:
            return arith("inv", a) ** (-exponent)
        return a ** exponent
    raise FieldError(f"unknown operation {op!r}")


def _same_field(a, b):
    if type(a) is not type(b):
        raise FieldError(f"field mismatch: {type(a).name} vs {type(b).name}")


def coefficients(e):
    """Polynomial-basis coordinates of e, ascending degree."""
    return tuple(int(c) for c in e.vector()[::-1])


# ---------------- Element codec ----------------
def parse_element(F, text):
    """Decimal residue for prime fields; '0' or 'g^i' for extension fields."""
    token = text.strip()
    if F.m == 1:
        if not token.isdigit() or int(token) >= F.p:
            raise FieldError(f"{token!r} is not a residue of GF({F.p})")
        return F.gf(int(token))
    if token == "0":
        return F.zero
    match = POWER_TOKEN.fullmatch(token)
    if match is None:
        raise FieldError(f"{token!r} is neither '0' nor 'g^i'")
    exponent = int(match.group(1))
    if exponent >= F.q - 1:
        raise FieldError(f"exponent {exponent} outside [0, {F.q - 1})")
    return F.gen ** exponent


def format_element(F, e):
    F.require(e)
    if F.m == 1:
        return str(int(e))
    if e == 0:
        return "0"
    return f"g^{int(e.log())}"


def element_codec(F, direction, value):
    if direction == "parse":
        return parse_element(F, value)
    if direction == "format":
        return format_element(F, value)
    raise FieldError(f"unknown codec direction {direction!r}")


def parse_elements(F, text):
    """Comma-separated element tokens."""
    tokens = [t for t in text.split(",") if t.strip()]
    return F.vector([parse_element(F, t) for t in tokens])


def format_elements(F, values):
    return [format_element(F, v) for v in values]


def element_sort_key(e):
    """Zero first, then generator-power order."""
    if e == 0:
        return (0, 0)
    return (1, int(e.log()))
