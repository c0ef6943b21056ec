"""Universal enveloping algebra of vector fields and its Hopf structure.

A word is a tuple of vector fields ``(v1, ..., vm)`` standing for the
operator ``v1 o v2 o ... o vm`` (``vm`` acts first); the empty word is the
unit.  Elements of ``U``, ``U (x) U`` and ``U (x) U (x) U`` with lambda-series
coefficients share one sparse representation keyed by
``(lambda_degree, (word_1, ..., word_k))``.

Semantic equality is decided on the differential-operator normal form
``sum_beta P_beta(x) d^beta`` of every tensor slot.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Dict, List, Sequence, Tuple

from .fields import Form, Tensor, VectorField, lie, lie_bracket
from .functions import FunctionExpr, fn_mul, partial
from .residual import Residual
from .scalars import LambdaSeries, QI, ONE

__all__ = [
    "Word",
    "UElem",
    "UEnvElement",
    "UTensor2",
    "UTensor3",
    "coproduct",
    "delta_left",
    "delta_right",
    "counit",
    "counit_left",
    "counit_right",
    "antipode",
    "multiply_out",
    "ad_word",
    "adjoint_action",
    "adjoint_action_hopf",
    "act",
    "word_normal_form",
    "op_normal_form",
    "op_equal",
    "op_residual",
    "evaluate_on_monomials",
]

Word = Tuple[VectorField, ...]


class UElem:
    """Sparse element of ``U^{(x)k}[[lambda]]`` truncated at ``order``."""

    __slots__ = ("arity", "order", "terms")

    def __init__(self, arity: int, order: int, terms: Dict | None = None):
        self.arity = arity
        self.order = order
        out = {}
        for key, c in (terms or {}).items():
            d, words = key
            if d > order or not c:
                continue
            if len(words) != arity:
                raise ValueError("term has %d tensor slots, expected %d" % (len(words), arity))
            out[(d, tuple(tuple(w) for w in words))] = QI.coerce(c)
        self.terms = out

    @classmethod
    def _raw(cls, arity, order, terms):
        obj = _CLASSES.get(arity, UElem).__new__(_CLASSES.get(arity, UElem))
        obj.arity, obj.order, obj.terms = arity, order, terms
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def unit(cls, arity: int, order: int) -> "UElem":
        return UElem._raw(arity, order, {(0, ((),) * arity): ONE})

    @classmethod
    def zero(cls, arity: int, order: int) -> "UElem":
        return UElem._raw(arity, order, {})

    @classmethod
    def from_words(cls, words: Sequence[Word], order: int, coeff=1, degree: int = 0) -> "UElem":
        words = tuple(tuple(w) for w in words)
        return UElem(len(words), order, {(degree, words): coeff})

    @classmethod
    def from_series(cls, series: LambdaSeries, order: int | None = None) -> "UEnvElement":
        """Vector-field-valued series to degree-1 words."""
        order = series.order if order is None else order
        out: Dict = {}
        for d, v in series.coeffs.items():
            if d > order:
                continue
            _add_term(out, (d, ((v,),)), ONE)
        return UElem._raw(1, order, out)

    # structure --------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if not isinstance(other, UElem) or other.arity != self.arity:
            raise TypeError("incompatible enveloping-algebra operands")

    def __add__(self, other):
        self._check(other)
        order = min(self.order, other.order)
        out = {k: c for k, c in self.terms.items() if k[0] <= order}
        for k, c in other.terms.items():
            if k[0] <= order:
                _add_term(out, k, c)
        return UElem._raw(self.arity, order, out)

    def __neg__(self):
        return UElem._raw(self.arity, self.order, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c, shift: int = 0) -> "UElem":
        c = QI.coerce(c)
        if not c:
            return UElem.zero(self.arity, self.order)
        out = {}
        for (d, w), v in self.terms.items():
            if d + shift <= self.order:
                out[(d + shift, w)] = v * c
        return UElem._raw(self.arity, self.order, out)

    def __mul__(self, other):
        if not isinstance(other, UElem):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        out: Dict = {}
        for (d1, w1), c1 in self.terms.items():
            for (d2, w2), c2 in other.terms.items():
                d = d1 + d2
                if d > order:
                    continue
                words = tuple(a + b for a, b in zip(w1, w2))
                _add_term(out, (d, words), c1 * c2)
        return UElem._raw(self.arity, order, out)

    def __rmul__(self, c):
        return self.scale(c)

    def tensor(self, other: "UElem") -> "UElem":
        """``a (x) b`` with the slots of ``b`` appended."""
        order = min(self.order, other.order)
        out: Dict = {}
        for (d1, w1), c1 in self.terms.items():
            for (d2, w2), c2 in other.terms.items():
                if d1 + d2 <= order:
                    _add_term(out, (d1 + d2, w1 + w2), c1 * c2)
        return UElem._raw(self.arity + other.arity, order, out)

    def permute(self, perm: Sequence[int]) -> "UElem":
        """New slot ``j`` holds old slot ``perm[j]``; ``(1, 0)`` is the flip."""
        out: Dict = {}
        for (d, w), c in self.terms.items():
            _add_term(out, (d, tuple(w[p] for p in perm)), c)
        return UElem._raw(self.arity, self.order, out)

    def flip(self) -> "UElem":
        if self.arity != 2:
            raise ValueError("flip needs a two-slot element")
        return self.permute((1, 0))

    def truncate(self, order: int) -> "UElem":
        order = min(order, self.order)
        return UElem._raw(self.arity, order, {k: c for k, c in self.terms.items() if k[0] <= order})

    def canonical(self, keyfn: Callable | None) -> "UElem":
        """Sort the letters of every word by ``keyfn`` (valid for commuting letters)."""
        if keyfn is None:
            return self
        out: Dict = {}
        for (d, w), c in self.terms.items():
            _add_term(out, (d, tuple(tuple(sorted(x, key=keyfn)) for x in w)), c)
        return UElem._raw(self.arity, self.order, out)

    def by_degree(self) -> List[Tuple[int, QI, Tuple[Word, ...]]]:
        return [(d, c, w) for (d, w), c in self.terms.items()]

    def max_word_length(self) -> int:
        return max((len(x) for (_, w) in self.terms for x in w), default=0)

    def __len__(self):
        return len(self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        names: Dict = {}

        def wname(word):
            if not word:
                return "1"
            return "".join(names.setdefault(v, "v%d" % len(names)) for v in word)

        parts = []
        for (d, w), c in self.terms.items():
            lam = "" if d == 0 else ("L" if d == 1 else "L^%d" % d)
            parts.append("%s%s %s" % (c.render(), ("*" + lam) if lam else "", "(x)".join(wname(x) for x in w)))
        return " + ".join(parts)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, self.render())


class UEnvElement(UElem):
    __slots__ = ()

    def __init__(self, terms: Dict | None = None, order: int = 0):
        super().__init__(1, order, terms)

    @classmethod
    def generator(cls, v: VectorField, order: int, coeff=1) -> "UEnvElement":
        return UElem._raw(1, order, {(0, ((v,),)): QI.coerce(coeff)})

    @classmethod
    def word(cls, word: Sequence[VectorField], order: int, coeff=1) -> "UEnvElement":
        return UElem._raw(1, order, {(0, (tuple(word),)): QI.coerce(coeff)})


class UTensor2(UElem):
    __slots__ = ()

    def __init__(self, terms: Dict | None = None, order: int = 0):
        super().__init__(2, order, terms)


class UTensor3(UElem):
    __slots__ = ()

    def __init__(self, terms: Dict | None = None, order: int = 0):
        super().__init__(3, order, terms)


_CLASSES = {1: UEnvElement, 2: UTensor2, 3: UTensor3}


def _add_term(out: Dict, key, c):
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


# -- Hopf operations -----------------------------------------------------

def _word_coproduct(word: Word) -> Dict[Tuple[Word, Word], int]:
    """Shuffle splitting of a word: each letter goes left or right."""
    out: Dict = {}
    m = len(word)
    for r in range(m + 1):
        for left in combinations(range(m), r):
            ls = set(left)
            key = (tuple(word[j] for j in left), tuple(word[j] for j in range(m) if j not in ls))
            out[key] = out.get(key, 0) + 1
    return out


def _apply_slot(x: UElem, slot: int, fn: Callable[[Word], Dict[Tuple[Word, ...], int]]) -> UElem:
    """Replace slot ``slot`` by the multi-slot image ``fn(word)``."""
    out: Dict = {}
    arity = None
    for (d, w), c in x.terms.items():
        for pieces, mult in fn(w[slot]).items():
            words = w[:slot] + tuple(pieces) + w[slot + 1:]
            arity = len(words)
            _add_term(out, (d, words), c * mult)
    if arity is None:
        arity = x.arity + 1
    return UElem._raw(arity, x.order, out)


def coproduct(xi: UElem) -> UElem:
    """``Delta`` on ``U``: primitive on generators, multiplicative on words."""
    if xi.arity != 1:
        raise ValueError("coproduct expects a one-slot element")
    return _apply_slot(xi, 0, _word_coproduct)


def delta_left(F: UElem) -> UElem:
    """``(Delta (x) id) F``."""
    return _apply_slot(F, 0, _word_coproduct)


def delta_right(F: UElem) -> UElem:
    """``(id (x) Delta) F``."""
    return _apply_slot(F, F.arity - 1, _word_coproduct)


def _contract_slot(x: UElem, slot: int) -> UElem:
    out: Dict = {}
    for (d, w), c in x.terms.items():
        if not w[slot]:
            _add_term(out, (d, w[:slot] + w[slot + 1:]), c)
    return UElem._raw(x.arity - 1, x.order, out)


def counit(xi: UElem) -> LambdaSeries:
    """``epsilon``: kills every non-empty word."""
    if xi.arity != 1:
        raise ValueError("counit expects a one-slot element")
    coeffs: Dict[int, QI] = {}
    for (d, w), c in xi.terms.items():
        if not w[0]:
            coeffs[d] = coeffs.get(d, QI(0)) + c
    return LambdaSeries(coeffs, xi.order)


def counit_left(F: UElem) -> UElem:
    """``(epsilon (x) id) F``."""
    return _contract_slot(F, 0)


def counit_right(F: UElem) -> UElem:
    """``(id (x) epsilon) F``."""
    return _contract_slot(F, F.arity - 1)


def antipode(xi: UElem, slot: int = 0) -> UElem:
    """``S`` reverses words with sign ``(-1)^length`` (on the given slot)."""
    out: Dict = {}
    for (d, w), c in xi.terms.items():
        word = w[slot]
        sign = -1 if len(word) % 2 else 1
        _add_term(out, (d, w[:slot] + (word[::-1],) + w[slot + 1:]), c * sign)
    return UElem._raw(xi.arity, xi.order, out)


def multiply_out(x: UElem) -> UElem:
    """``mu``: concatenate all slots into one word."""
    out: Dict = {}
    for (d, w), c in x.terms.items():
        _add_term(out, (d, (tuple(v for word in w for v in word),)), c)
    return UElem._raw(1, x.order, out)


# -- adjoint action and the action on geometric objects ------------------

_bracket = lru_cache(maxsize=1 << 18)(lie_bracket)


@lru_cache(maxsize=None)
def _ad_letter(v: VectorField, word: Word) -> Tuple[Tuple[Word, QI], ...]:
    """``[v, w1...wm] = sum_i w1..[v,wi]..wm`` as (word, coefficient) pairs."""
    out: Dict = {}
    for i, wi in enumerate(word):
        b = _bracket(v, wi)
        if b:
            key = word[:i] + (b,) + word[i + 1:]
            out[key] = out.get(key, 0) + 1
    return tuple((w, QI(c)) for w, c in out.items() if c)


@lru_cache(maxsize=None)
def ad_word(t: Word, word: Word) -> Tuple[Tuple[Word, QI], ...]:
    """``ad_{t1...tk}(word) = ad_{t1}(... ad_{tk}(word))``."""
    if not t:
        return ((word, ONE),)
    inner = ad_word(t[1:], word)
    out: Dict = {}
    for w, c in inner:
        for w2, c2 in _ad_letter(t[0], w):
            _add_term(out, w2, c * c2)
    return tuple(out.items())


def adjoint_action(xi: UElem, zeta: UElem) -> UElem:
    """``ad_xi(zeta)`` with generators acting as commutators (a derivation on words)."""
    order = min(xi.order, zeta.order)
    out: Dict = {}
    for (d1, (t,)), c1 in xi.terms.items():
        for (d2, (w,)), c2 in zeta.terms.items():
            if d1 + d2 > order:
                continue
            for w2, c3 in ad_word(t, w):
                _add_term(out, (d1 + d2, (w2,)), c1 * c2 * c3)
    return UElem._raw(1, order, out)


def adjoint_action_hopf(xi: UElem, zeta: UElem) -> UElem:
    """``xi_(1) zeta S(xi_(2))`` computed through the coproduct."""
    dx = antipode(coproduct(xi), slot=1)
    order = min(xi.order, zeta.order)
    out: Dict = {}
    for (d1, (a, b)), c1 in dx.terms.items():
        for (d2, (w,)), c2 in zeta.terms.items():
            if d1 + d2 <= order:
                _add_term(out, (d1 + d2, (a + w + b,)), c1 * c2)
    return UElem._raw(1, order, out)


def _act_letter(v: VectorField, obj):
    if isinstance(obj, (FunctionExpr, Tensor, Form)):
        return lie(v, obj)
    if isinstance(obj, UElem):
        return adjoint_action(UEnvElement.generator(v, obj.order), obj)
    raise TypeError("twist factors cannot act on %r" % type(obj).__name__)


_ACT_CACHE: Dict = {}
_ACT_CACHE_LIMIT = 400000


def act(word: Word, obj):
    """Action of a word on a function, tensor, form or enveloping element."""
    if not word:
        return obj
    if isinstance(obj, UElem):
        out: Dict = {}
        for (d, (w,)), c in obj.terms.items():
            for w2, c2 in ad_word(word, w):
                _add_term(out, (d, (w2,)), c * c2)
        return UElem._raw(1, obj.order, out)
    key = (word, obj)
    hit = _ACT_CACHE.get(key)
    if hit is not None:
        return hit
    res = _act_letter(word[0], act(word[1:], obj))
    if len(_ACT_CACHE) > _ACT_CACHE_LIMIT:
        _ACT_CACHE.clear()
    _ACT_CACHE[key] = res
    return res


# -- operator normal form and semantic equality --------------------------

def _nf_compose(v: Tensor, nf: Dict[Tuple[int, ...], FunctionExpr], dim: int):
    """``v o (sum P_beta d^beta)`` in normal form."""
    out: Dict = {}

    def add(beta, f):
        if not f:
            return
        prev = out.get(beta)
        s = f if prev is None else prev + f
        if s:
            out[beta] = s
        elif prev is not None:
            del out[beta]

    for (mu,), vmu in v.comps.items():
        for beta, P in nf.items():
            add(beta, fn_mul(vmu, partial(mu, P)))
            b2 = beta[:mu] + (beta[mu] + 1,) + beta[mu + 1:]
            add(b2, fn_mul(vmu, P))
    return out


@lru_cache(maxsize=None)
def _word_nf(word: Word, dim: int) -> Tuple:
    if not word:
        return (((0,) * dim, FunctionExpr.constant(1, dim)),)
    inner = dict(_word_nf(word[1:], dim))
    return tuple(sorted(_nf_compose(word[0], inner, dim).items(), key=lambda kv: kv[0]))


def word_normal_form(word: Word, dim: int) -> Dict[Tuple[int, ...], FunctionExpr]:
    """Coefficients ``P_beta`` of the operator ``word = sum P_beta d^beta``."""
    return dict(_word_nf(tuple(word), dim))


def _infer_dim(x: UElem) -> int:
    for (_, w) in x.terms:
        for word in w:
            if word:
                return word[0].dim
    return 0


def op_normal_form(x: UElem, deg: int | None = None, dim: int | None = None) -> Dict:
    """Merged normal form keyed by ``(lambda_degree, betas, coefficient-term keys)``.

    Entries whose slot derivative order exceeds ``deg`` are dropped: they
    annihilate every monomial of degree at most ``deg``.
    """
    if dim is None:
        dim = _infer_dim(x)
    out: Dict = {}
    for (d, words), c in x.terms.items():
        slots = []
        for w in words:
            nf = [(b, P) for b, P in _word_nf(w, dim) if deg is None or sum(b) <= deg]
            slots.append(nf)
        for combo in product(*slots):
            betas = tuple(b for b, _ in combo)
            for tkeys in product(*[list(P.terms.items()) for _, P in combo]):
                coeff = c
                for _, tc in tkeys:
                    coeff = coeff * tc
                _add_term(out, (d, betas, tuple(k for k, _ in tkeys)), coeff)
    return out


def op_residual(x: UElem, deg: int | None = None, dim: int | None = None) -> Residual:
    counts = {d: 0 for d in range(x.order + 1)}
    for key in op_normal_form(x, deg, dim):
        counts[key[0]] += 1
    return Residual(counts)


def op_equal(a: UElem, b: UElem, deg: int | None = None) -> bool:
    """Operator equality on all monomial test functions of degree <= ``deg``."""
    dim = _infer_dim(a) or _infer_dim(b)
    return not op_normal_form(a - b, deg, dim)


def evaluate_on_monomials(x: UElem, deg: int, dim: int) -> Dict:
    """Brute-force image of every monomial tensor of degree <= ``deg`` per slot.

    Independent of the normal form; used to cross-check ``op_equal``.
    """
    monos = []
    for total in range(deg + 1):
        for alpha in product(range(total + 1), repeat=dim):
            if sum(alpha) == total:
                monos.append(FunctionExpr.monomial(alpha))
    out = {}
    for inputs in product(range(len(monos)), repeat=x.arity):
        acc: Dict = {}
        for (d, words), c in x.terms.items():
            images = [act(w, monos[j]) for w, j in zip(words, inputs)]
            if not all(images):
                continue
            for tkeys in product(*[list(f.terms.items()) for f in images]):
                coeff = c
                for _, tc in tkeys:
                    coeff = coeff * tc
                _add_term(acc, (d, tuple(k for k, _ in tkeys)), coeff)
        if acc:
            out[inputs] = acc
    return out
