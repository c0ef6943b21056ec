"""Finite-mode algebra of a free scalar field on twisted Moyal space.

Classical side: commuting polynomials in mode symbols ``a(k)``, ``a*(k)``
with Kronecker brackets ``{a(k), a*(k')} = -(i/hbar) delta_kk'``.  Quantum
side: normal-ordered words in ``a(k)``, ``a+(k)`` with
``[a(k), a+(k')] = delta_kk'``.

Both carry the momentum grading ``p(a(k)) = k``, ``p(a*(k)) = -k``; the
twisted product of homogeneous pieces of momenta ``(p, q)`` is
``exp(-(i/2) theta(p, q))`` times the plain product, where
``theta(p, q) = sum_{i<j} theta^ij (p_i q_j - p_j q_i)``.  Phases are stored
as exact exponent vectors over the symbols ``theta^ij`` (or over a single
numeric symbol when theta is given as rationals).
"""
from __future__ import annotations

import json
from functools import lru_cache
from typing import Dict, Iterable, Sequence, Tuple

from gmpy2 import is_square, isqrt, mpq

from .scalars import QI, I, ONE, as_rational, rational_str

__all__ = [
    "ModeLattice",
    "ClassicalModePoly",
    "QuantumElement",
    "LatticeError",
    "mode_star",
    "mode_poisson",
    "mode_poisson_star",
    "braid",
    "normal_order",
    "quantum_star",
    "star_commutator",
    "quantize",
    "correspondence_residual",
    "correspondence_check",
    "field_bracket_check",
    "hbar_order",
]

ANN = "a"
CRE = "a*"


class LatticeError(ValueError):
    """Invalid or mismatched mode lattice."""


class ModeLattice:
    """Finite momentum set ``K`` in ``Z^d`` with theta data and mode energies."""

    def __init__(self, d: int, momenta: Iterable[Sequence[int]], theta="sym", E: Dict | None = None):
        self.d = d
        self.momenta = tuple(sorted({tuple(int(x) for x in k) for k in momenta}))
        if any(len(k) != d for k in self.momenta):
            raise LatticeError("momenta must have %d components" % d)
        self.pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
        if isinstance(theta, str):
            if theta != "sym":
                raise LatticeError("theta must be 'sym' or a rational matrix")
            self.symbolic = True
            self.theta = None
            self.symbols = ["theta%d%d" % (i + 1, j + 1) for i, j in self.pairs]
        else:
            self.symbolic = False
            mat = [[as_rational(str(x) if not isinstance(x, int) else x) for x in row] for row in theta]
            if len(mat) != d or any(len(r) != d for r in mat):
                raise LatticeError("theta must be a %dx%d matrix" % (d, d))
            for i in range(d):
                for j in range(d):
                    if mat[i][j] != -mat[j][i]:
                        raise LatticeError("theta must be antisymmetric")
            self.theta = mat
            self.symbols = ["1"]
        self.E = {}
        for k in self.momenta:
            val = None
            if E is not None:
                val = E.get(k, E.get(",".join(map(str, k))))
            self.E[k] = as_rational(val if val is not None else 1 + sum(x * x for x in k))
            if self.E[k] <= 0:
                raise LatticeError("mode energies must be positive")

    @property
    def nsym(self) -> int:
        return len(self.symbols)

    def zero_phase(self) -> Tuple:
        return (mpq(0),) * self.nsym

    def phase(self, p: Sequence[int], q: Sequence[int], factor) -> Tuple:
        """Exponents of ``exp(i * factor * theta(p, q))``."""
        factor = as_rational(factor)
        if self.symbolic:
            return tuple(factor * (p[i] * q[j] - p[j] * q[i]) for i, j in self.pairs)
        s = sum(self.theta[i][j] * (p[i] * q[j] - p[j] * q[i]) for i, j in self.pairs)
        return (factor * s,)

    def is_negation_closed(self) -> bool:
        ks = set(self.momenta)
        return all(tuple(-x for x in k) in ks for k in self.momenta)

    def same(self, other: "ModeLattice") -> bool:
        return (self.d == other.d and self.momenta == other.momenta and self.symbolic == other.symbolic
                and self.theta == other.theta)

    def render_phase(self, ph: Tuple) -> str:
        parts = []
        for r, s in zip(ph, self.symbols):
            if r:
                parts.append("%s*%s" % (rational_str(r), s) if s != "1" else rational_str(r))
        return " + ".join(parts)

    @classmethod
    def from_json(cls, doc) -> "ModeLattice":
        if isinstance(doc, str):
            doc = json.loads(doc)
        d = int(doc.get("d", 2))
        theta = doc.get("theta", "sym")
        if isinstance(theta, list) and theta and isinstance(theta[0], str) and theta[0] == "sym":
            theta = "sym"
        E = {}
        for key, val in (doc.get("E") or {}).items():
            E[tuple(int(x) for x in key.strip("()[] ").split(","))] = str(val)
        return cls(d, doc["momenta"], theta, E)


def _check_lattice(a, b):
    if not a.lattice.same(b.lattice):
        raise LatticeError("arguments live on different mode lattices")


def _add(out: Dict, key, c):
    prev = out.get(key)
    if prev is None:
        if c:
            out[key] = c
    else:
        s = prev + c
        if s:
            out[key] = s
        else:
            del out[key]


def _phase_add(p, q):
    return tuple(a + b for a, b in zip(p, q))


def _wave_add(u, v):
    if not u:
        return v
    if not v:
        return u
    w = tuple(a + b for a, b in zip(u, v))
    return w if any(w) else ()


def _momentum(letters, d) -> Tuple[int, ...]:
    p = [0] * d
    for kind, k in letters:
        s = 1 if kind == ANN else -1
        for i in range(d):
            p[i] += s * k[i]
    return tuple(p)


def _render_letter(kind, k, quantum=False):
    ks = ",".join(str(x) for x in k)
    if kind == ANN:
        return "a(%s)" % ks
    return ("a+(%s)" if quantum else "a*(%s)") % ks


class _ModeAlgebra:
    """Shared storage: ``terms[(word, hbar, phase, wave)] = QI``."""

    __slots__ = ("lattice", "terms")
    quantum = False

    def __init__(self, lattice: ModeLattice, terms: Dict | None = None):
        self.lattice = lattice
        self.terms = {k: QI.coerce(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, lattice, terms):
        obj = cls.__new__(cls)
        obj.lattice, obj.terms = lattice, terms
        return obj

    @classmethod
    def zero(cls, lattice):
        return cls._raw(lattice, {})

    @classmethod
    def constant(cls, lattice, c=1, hbar: int = 0):
        c = QI.coerce(c)
        return cls._raw(lattice, {((), hbar, lattice.zero_phase(), ()): c} if c else {})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        _check_lattice(self, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add(out, k, c)
        return self._raw(self.lattice, out)

    def __neg__(self):
        return self._raw(self.lattice, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c, hbar: int = 0, phase: Tuple | None = None):
        c = QI.coerce(c)
        out = {}
        for (w, h, ph, wave), v in self.terms.items():
            key = (w, h + hbar, _phase_add(ph, phase) if phase else ph, wave)
            _add(out, key, v * c)
        return self._raw(self.lattice, out)

    def __eq__(self, other):
        if not isinstance(other, _ModeAlgebra):
            return NotImplemented
        return type(self) is type(other) and self.lattice.same(other.lattice) and self.terms == other.terms

    __hash__ = None

    def momentum(self, word) -> Tuple[int, ...]:
        return _momentum(word, self.lattice.d)

    def homogeneous(self) -> Dict[Tuple[int, ...], "_ModeAlgebra"]:
        parts: Dict = {}
        for key, c in self.terms.items():
            parts.setdefault(self.momentum(key[0]), {})[key] = c
        return {p: self._raw(self.lattice, t) for p, t in parts.items()}

    def render(self) -> str:
        if not self.terms:
            return "0"
        lat = self.lattice
        parts = []
        for (w, h, ph, wave), c in sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0])):
            factors = [_render_letter(kind, k, self.quantum) for kind, k in w]
            if h:
                factors.append("hbar^%d" % h if h != 1 else "hbar")
            if any(ph):
                factors.append("exp(i*(%s))" % lat.render_phase(ph))
            if wave:
                factors.append("e(%s)" % ",".join(str(x) for x in wave))
            body = "*".join(factors)
            if not body:
                parts.append(c.render())
            elif c == ONE:
                parts.append(body)
            else:
                parts.append(c.render() + "*" + body)
        return " + ".join(parts)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, self.render())


def _sort_key(key):
    w, h, ph, wave = key
    return (len(w), w, h, tuple((r.numerator, r.denominator) for r in ph), wave)


class ClassicalModePoly(_ModeAlgebra):
    """Commuting polynomial in ``a(k)``, ``a*(k)``; words are sorted letter tuples."""

    __slots__ = ()
    quantum = False

    @classmethod
    def mode(cls, lattice, kind: str, k, c=1, wave=()) -> "ClassicalModePoly":
        k = tuple(k)
        if k not in lattice.momenta:
            raise LatticeError("momentum %r is not in the lattice" % (k,))
        if kind not in (ANN, CRE):
            raise ValueError("mode kind must be 'a' or 'a*'")
        return cls._raw(lattice, {(((kind, k),), 0, lattice.zero_phase(), tuple(wave)): QI.coerce(c)})

    @classmethod
    def a(cls, lattice, k, c=1):
        return cls.mode(lattice, ANN, k, c)

    @classmethod
    def astar(cls, lattice, k, c=1):
        return cls.mode(lattice, CRE, k, c)

    @classmethod
    def monomial(cls, lattice, letters, c=1) -> "ClassicalModePoly":
        out = cls.constant(lattice, c)
        for kind, k in letters:
            out = out * cls.mode(lattice, kind, k)
        return out

    def __mul__(self, other):
        if not isinstance(other, ClassicalModePoly):
            return self.scale(other)
        _check_lattice(self, other)
        out: Dict = {}
        for (w1, h1, p1, v1), c1 in self.terms.items():
            for (w2, h2, p2, v2), c2 in other.terms.items():
                key = (tuple(sorted(w1 + w2)), h1 + h2, _phase_add(p1, p2), _wave_add(v1, v2))
                _add(out, key, c1 * c2)
        return ClassicalModePoly._raw(self.lattice, out)

    def derivative(self, kind: str, k) -> "ClassicalModePoly":
        """Partial derivative with respect to the symbol ``kind(k)``."""
        letter = (kind, tuple(k))
        out: Dict = {}
        for (w, h, ph, wave), c in self.terms.items():
            m = w.count(letter)
            if not m:
                continue
            j = w.index(letter)
            _add(out, (w[:j] + w[j + 1:], h, ph, wave), c * m)
        return ClassicalModePoly._raw(self.lattice, out)

    def letters(self):
        seen = []
        for (w, _, _, _) in self.terms:
            for letter in w:
                if letter not in seen:
                    seen.append(letter)
        return seen


def mode_star(F, G, lattice: ModeLattice | None = None):
    """Twisted product: ``exp(-(i/2) theta(p, q)) F G`` on homogeneous pieces."""
    if isinstance(F, QuantumElement):
        return quantum_star(F, G)
    _check_lattice(F, G)
    lat = F.lattice
    out = ClassicalModePoly.zero(lat)
    for p, Fp in F.homogeneous().items():
        for q, Gq in G.homogeneous().items():
            out = out + (Fp * Gq).scale(1, phase=lat.phase(p, q, mpq(-1, 2)))
    return out


def mode_poisson(F: ClassicalModePoly, G: ClassicalModePoly) -> ClassicalModePoly:
    """``sum_k -(i/hbar) (dF/da(k) dG/da*(k) - dF/da*(k) dG/da(k))``."""
    _check_lattice(F, G)
    lat = F.lattice
    out = ClassicalModePoly.zero(lat)
    ks = set()
    for kind, k in F.letters() + G.letters():
        ks.add(k)
    for k in sorted(ks):
        t = F.derivative(ANN, k) * G.derivative(CRE, k) - F.derivative(CRE, k) * G.derivative(ANN, k)
        out = out + t
    return out.scale(QI(0, -1), hbar=-1)


def mode_poisson_star(F: ClassicalModePoly, G: ClassicalModePoly) -> ClassicalModePoly:
    """``{F, G}* = {fbar^a(F), fbar_a(G)}``."""
    _check_lattice(F, G)
    lat = F.lattice
    out = ClassicalModePoly.zero(lat)
    for p, Fp in F.homogeneous().items():
        for q, Gq in G.homogeneous().items():
            out = out + mode_poisson(Fp, Gq).scale(1, phase=lat.phase(p, q, mpq(-1, 2)))
    return out


def braid(F, G, op):
    """``op(Rbar^a(G), Rbar_a(F))``: on momenta ``(q, p)`` the R-matrix gives ``exp(i theta(q, p))``."""
    _check_lattice(F, G)
    lat = F.lattice
    out = None
    for p, Fp in F.homogeneous().items():
        for q, Gq in G.homogeneous().items():
            term = op(Gq.scale(1, phase=lat.phase(q, p, 1)), Fp)
            out = term if out is None else out + term
    return out if out is not None else type(F).zero(lat)


# -- quantum side ------------------------------------------------------------

@lru_cache(maxsize=None)
def _normal(word: Tuple) -> Tuple:
    """Normal ordering of a letter word: ``(creators, annihilators) -> multiplicity``."""
    for i in range(len(word) - 1):
        if word[i][0] == ANN and word[i + 1][0] == CRE:
            out: Dict = dict(_normal(word[:i] + (word[i + 1], word[i]) + word[i + 2:]))
            if word[i][1] == word[i + 1][1]:
                for key, m in _normal(word[:i] + word[i + 2:]):
                    out[key] = out.get(key, 0) + m
            return tuple((k, m) for k, m in out.items() if m)
    cre = tuple(sorted(l for l in word if l[0] == CRE))
    ann = tuple(sorted(l for l in word if l[0] == ANN))
    return (((cre + ann), 1),)


class QuantumElement(_ModeAlgebra):
    """Normal-ordered operator polynomial: words are ``creators + annihilators``, each sorted."""

    __slots__ = ()
    quantum = True

    @classmethod
    def from_word(cls, lattice, letters, c=1, hbar: int = 0) -> "QuantumElement":
        return normal_order(lattice, letters, c, hbar)

    def __mul__(self, other):
        if not isinstance(other, QuantumElement):
            return self.scale(other)
        _check_lattice(self, other)
        out: Dict = {}
        for (w1, h1, p1, v1), c1 in self.terms.items():
            for (w2, h2, p2, v2), c2 in other.terms.items():
                ph = _phase_add(p1, p2)
                wave = _wave_add(v1, v2)
                for w, m in _normal(w1 + w2):
                    _add(out, (w, h1 + h2, ph, wave), c1 * c2 * m)
        return QuantumElement._raw(self.lattice, out)


def normal_order(lattice: ModeLattice, letters: Sequence, c=1, hbar: int = 0) -> QuantumElement:
    """Rewrite ``a(k) a+(k') -> a+(k') a(k) + delta_kk'`` until normal ordered."""
    word = tuple((kind, tuple(k)) for kind, k in letters)
    for kind, k in word:
        if kind not in (ANN, CRE):
            raise ValueError("operator kind must be 'a' or 'a*'")
        if k not in lattice.momenta:
            raise LatticeError("momentum %r is not in the lattice" % (k,))
    c = QI.coerce(c)
    out: Dict = {}
    for w, m in _normal(word):
        _add(out, (w, hbar, lattice.zero_phase(), ()), c * m)
    return QuantumElement._raw(lattice, out)


def quantum_star(F: QuantumElement, G: QuantumElement) -> QuantumElement:
    _check_lattice(F, G)
    lat = F.lattice
    out = QuantumElement.zero(lat)
    for p, Fp in F.homogeneous().items():
        for q, Gq in G.homogeneous().items():
            out = out + (Fp * Gq).scale(1, phase=lat.phase(p, q, mpq(-1, 2)))
    return out


def star_commutator(F: QuantumElement, G: QuantumElement) -> QuantumElement:
    """``[F, G]* = F * G - Rbar^a(G) * Rbar_a(F)``."""
    return quantum_star(F, G) - braid(F, G, quantum_star)


def quantize(F: ClassicalModePoly) -> QuantumElement:
    """``a -> a``, ``a* -> a+`` with creators placed left (already normal ordered)."""
    out: Dict = {}
    for (w, h, ph, wave), c in F.terms.items():
        cre = tuple(sorted(l for l in w if l[0] == CRE))
        ann = tuple(sorted(l for l in w if l[0] == ANN))
        _add(out, (cre + ann, h, ph, wave), c)
    return QuantumElement._raw(F.lattice, out)


def hbar_order(key) -> int:
    """Twice the effective hbar order: each mode factor counts as ``hbar^(-1/2)``."""
    w, h = key[0], key[1]
    return 2 * h - len(w)


def correspondence_residual(F: ClassicalModePoly, G: ClassicalModePoly) -> QuantumElement:
    """``quantize({F,G}*) + (i/hbar) [F^, G^]*`` in normal-ordered form."""
    classical = quantize(mode_poisson_star(F, G))
    quantum = star_commutator(quantize(F), quantize(G)).scale(I, hbar=-1)
    return classical + quantum


def correspondence_check(F: ClassicalModePoly, G: ClassicalModePoly) -> Dict:
    """Split the correspondence residual into its leading-hbar part and the rest."""
    classical = quantize(mode_poisson_star(F, G))
    quantum = star_commutator(quantize(F), quantize(G)).scale(I, hbar=-1)
    residual = classical + quantum
    orders = [hbar_order(k) for k in list(classical.terms) + list(quantum.terms)]
    lead = min(orders) if orders else None
    leading = sum(1 for k in residual.terms if hbar_order(k) == lead)
    higher = sum(1 for k in residual.terms if hbar_order(k) != lead)
    return {
        "leading_order": lead,
        "leading_residual_terms": leading,
        "higher_residual_terms": higher,
        "exact_zero": not residual,
    }


# -- field assembly ------------------------------------------------------------

def _sqrt_rational(r: mpq) -> mpq:
    num, den = r.numerator, r.denominator
    if not (is_square(num) and is_square(den)):
        raise ValueError("amplitude product sqrt(%s) is irrational" % rational_str(r))
    return mpq(isqrt(num), isqrt(den))


def _field_terms(lattice: ModeLattice, which: str, slot: int):
    """Mode terms of ``Phi_L`` or ``Pi_L`` at position slot 0 (x) or 1 (y).

    Returns ``(unit-coefficient term, rational square amplitude, rational
    prefactor, hbar power)``; the amplitude is the square root of the second
    entry times the prefactor.
    """
    d = lattice.d
    out = []
    for k in lattice.momenta:
        E = lattice.E[k]
        for kind, sign in ((ANN, 1), (CRE, -1)):
            wave = [0] * (2 * d)
            for i in range(d):
                wave[slot * d + i] = sign * k[i]
            term = ClassicalModePoly.mode(lattice, kind, k, 1, tuple(wave) if any(wave) else ())
            if which == "phi":
                out.append((term, 1 / (2 * E), QI(1), 0))
            else:
                # (-i hbar) sqrt(E/2) (a e^{ikx} - a* e^{-ikx})
                out.append((term, E / 2, QI(0, -1) * sign, 1))
    return out


def _field_bracket(lattice, left: str, right: str, twisted: bool) -> ClassicalModePoly:
    total = ClassicalModePoly.zero(lattice)
    bracket = mode_poisson_star if twisted else mode_poisson
    for t1, s1, c1, h1 in _field_terms(lattice, left, 0):
        for t2, s2, c2, h2 in _field_terms(lattice, right, 1):
            b = bracket(t1, t2)
            if not b:
                continue
            amp = QI(_sqrt_rational(mpq(s1) * mpq(s2))) * c1 * c2
            total = total + b.scale(amp, hbar=h1 + h2)
    return total


def _delta_lattice(lattice) -> ClassicalModePoly:
    """Discrete delta ``sum_{k in K} exp(i k (x - y))``."""
    out: Dict = {}
    for k in lattice.momenta:
        wave = tuple(k) + tuple(-x for x in k)
        _add(out, ((), 0, lattice.zero_phase(), wave if any(wave) else ()), ONE)
    return ClassicalModePoly._raw(lattice, out)


def field_bracket_check(lattice: ModeLattice) -> Dict:
    """Compare twisted and plain brackets of the lattice fields ``Phi_L``, ``Pi_L``.

    Positions stay symbolic: ``exp(i k x)`` factors are kept as wave keys
    over ``(x, y)``, so the equalities hold for every pair of points.
    """
    if not lattice.is_negation_closed():
        raise LatticeError("momentum set must be closed under negation")
    for k in lattice.momenta:
        if lattice.E[k] != lattice.E[tuple(-x for x in k)]:
            raise LatticeError("mode energies must satisfy E_k = E_-k")
    report = {}
    ok = True
    for left, right in (("phi", "pi"), ("phi", "phi"), ("pi", "pi")):
        tw = _field_bracket(lattice, left, right, True)
        plain = _field_bracket(lattice, left, right, False)
        expected = _delta_lattice(lattice) if (left, right) == ("phi", "pi") else ClassicalModePoly.zero(lattice)
        deformation = len((tw - plain).terms)
        mismatch = len((plain - expected).terms)
        good = deformation == 0 and mismatch == 0
        ok = ok and good
        report["%s-%s" % (left, right)] = {
            "twisted_minus_plain_terms": deformation,
            "plain_minus_expected_terms": mismatch,
            "ok": good,
        }
    report["ok"] = ok
    return report
