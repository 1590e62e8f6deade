"""
Steenrod Operation Words and Adem Rewriting

Operation words are composites of β, P^a, Sq^a and the formal Voevodsky
letters P_V^a, Sq_V^a, read left to right as written (the rightmost letter
acts first). OpPoly holds F_ℓ-linear combinations of words.

Features:
- Admissible sequences with excess and degree/weight calculus
- Adem reduction to admissible normal form (leftmost rule first)
- Mode-dependent P⁰: deleted in classical/étale mode, kept as a formal
  letter in motivic mode and pushed to the right end of each word
- Unstable evaluation on a degree-n class and the Cartan expansion

Usage:
    from cohops.utils.arith import PrimeContext
    from cohops.services.steenrod import OpPoly, P, Mode, adem_reduce

    ctx = PrimeContext(3)
    adem_reduce(OpPoly.word(ctx, (P(1), P(1))))                 # 2 P2
    adem_reduce(OpPoly.word(ctx, (P(1), P(1)), mode=Mode.MOTIVIC))  # 2 P2 P0

Educational Notes:
    - Termination: every Adem substitution lowers the moment Σ j·s_j of the
      power-letter subsequence, except the boundary term of P^{ℓb}βP^b which
      keeps the moment and moves β one place left.
    - Confluence is checked by the verification suite, not assumed.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

from cohops.utils.arith import Flp, PrimeContext, binom, signed
from cohops.utils.exceptions import AdemReductionError, NormalFormError, ValidationError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Letters and words
# ---------------------------------------------------------------------------

class LetterKind(str, Enum):
    BETA = 'beta'
    P = 'P'
    SQ = 'Sq'
    PV = 'PV'
    SQV = 'SqV'


class Mode(str, Enum):
    """How P⁰ is treated: identity (classical, étale) or formal letter (motivic)."""
    CLASSICAL = 'classical'
    MOTIVIC = 'motivic'
    ETALE = 'etale'

    @property
    def keeps_frobenius(self) -> bool:
        return self is Mode.MOTIVIC


POWER_KINDS = (LetterKind.P, LetterKind.SQ)
VOEVODSKY_KINDS = (LetterKind.PV, LetterKind.SQV)


class Letter(NamedTuple):
    kind: LetterKind
    n: int = 0

    @property
    def is_beta(self) -> bool:
        return self.kind is LetterKind.BETA

    @property
    def is_power(self) -> bool:
        return self.kind in POWER_KINDS

    @property
    def is_voevodsky(self) -> bool:
        return self.kind in VOEVODSKY_KINDS

    @property
    def is_frobenius(self) -> bool:
        """P⁰ (or Sq⁰ at ℓ=2)."""
        return self.is_power and self.n == 0

    @property
    def suspension_stable(self) -> bool:
        # all letters commute with simplicial suspension
        return True

    def sort_key(self) -> Tuple[int, int]:
        if self.is_beta:
            return (0, 0)
        return (1 if self.is_power else 2, self.n)

    def __str__(self):
        return 'beta' if self.is_beta else f"{self.kind.value}{self.n}"


Word = Tuple[Letter, ...]

BETA = Letter(LetterKind.BETA, 0)


def P(a: int) -> Letter:
    return Letter(LetterKind.P, a)


def Sq(a: int) -> Letter:
    return Letter(LetterKind.SQ, a)


def PV(a: int) -> Letter:
    return Letter(LetterKind.PV, a)


def SqV(a: int) -> Letter:
    return Letter(LetterKind.SQV, a)


def letter_degree(letter: Letter, ctx: PrimeContext) -> int:
    if letter.is_beta:
        return 1
    if letter.kind in (LetterKind.P, LetterKind.PV):
        return 2 * letter.n * (ctx.ell - 1)
    return letter.n


def word_degree(word: Word, ctx: PrimeContext) -> int:
    return sum(letter_degree(letter, ctx) for letter in word)


def word_sort_key(word: Word, ctx: PrimeContext):
    """Graded-lexicographic order with β below every power letter."""
    return (word_degree(word, ctx), tuple(letter.sort_key() for letter in word))


def format_word(word: Word) -> str:
    return ' '.join(str(letter) for letter in word) if word else '1'


def word_moment(word: Word) -> int:
    """Σ j·s_j over the power-letter subsequence (1-indexed)."""
    powers = [letter.n for letter in word if letter.is_power]
    return sum(j * s for j, s in enumerate(powers, start=1))


def rewrite_measure(word: Word) -> Tuple[int, int]:
    """
    (moment, β depth) where β depth counts, for each β, the power letters to
    its left. Every rewrite of the Adem engine lowers it lexicographically.
    """
    depth = powers = 0
    for letter in word:
        if letter.is_power:
            powers += 1
        elif letter.is_beta:
            depth += powers
    return word_moment(word), depth


def is_suspension_stable(word: Word) -> bool:
    return all(letter.suspension_stable for letter in word)


def _has_double_beta(word: Word) -> bool:
    return any(x.is_beta and y.is_beta for x, y in zip(word, word[1:]))


# ---------------------------------------------------------------------------
# OpPoly
# ---------------------------------------------------------------------------

class OpPoly:
    """
    A finite F_ℓ-linear combination of operation words.

    Words containing ββ are zero and never stored; coefficients are kept
    reduced and nonzero. Multiplication is composition (concatenation).
    """

    __slots__ = ('ctx', 'mode', '_terms')

    def __init__(self, ctx: PrimeContext, terms: Optional[Dict[Word, int]] = None,
                 mode: Mode = Mode.CLASSICAL):
        self.ctx = ctx
        self.mode = Mode(mode)
        self._terms: Dict[Word, int] = {}
        for word, coeff in (terms or {}).items():
            self._add(tuple(word), int(coeff))

    @classmethod
    def zero(cls, ctx: PrimeContext, mode: Mode = Mode.CLASSICAL) -> 'OpPoly':
        return cls(ctx, mode=mode)

    @classmethod
    def word(cls, ctx: PrimeContext, letters, coeff: int = 1,
             mode: Mode = Mode.CLASSICAL) -> 'OpPoly':
        return cls(ctx, {tuple(letters): coeff}, mode=mode)

    @classmethod
    def identity(cls, ctx: PrimeContext, mode: Mode = Mode.CLASSICAL) -> 'OpPoly':
        return cls(ctx, {(): 1}, mode=mode)

    def _add(self, word: Word, coeff: int) -> None:
        if _has_double_beta(word):
            return
        value = (self._terms.get(word, 0) + coeff) % self.ctx.ell
        if value:
            self._terms[word] = value
        else:
            self._terms.pop(word, None)

    def _check_compatible(self, other: 'OpPoly') -> None:
        if other.ctx != self.ctx or other.mode is not self.mode:
            raise ValidationError("cannot combine polynomials over different ℓ, d or mode")

    def copy(self) -> 'OpPoly':
        return OpPoly(self.ctx, dict(self._terms), self.mode)

    def terms(self) -> List[Tuple[Word, Flp]]:
        """Terms in canonical order."""
        ordered = sorted(self._terms, key=lambda w: word_sort_key(w, self.ctx))
        return [(w, self.ctx.flp(self._terms[w])) for w in ordered]

    def as_dict(self) -> Dict[Word, int]:
        return dict(self._terms)

    def coefficient(self, word) -> Flp:
        return self.ctx.flp(self._terms.get(tuple(word), 0))

    def words(self) -> List[Word]:
        return [w for w, _ in self.terms()]

    def __iter__(self) -> Iterator[Tuple[Word, Flp]]:
        return iter(self.terms())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: 'OpPoly') -> 'OpPoly':
        self._check_compatible(other)
        result = self.copy()
        for word, coeff in other._terms.items():
            result._add(word, coeff)
        return result

    def __neg__(self) -> 'OpPoly':
        return self * -1

    def __sub__(self, other: 'OpPoly') -> 'OpPoly':
        return self + (-other)

    def __mul__(self, other: Union['OpPoly', int, Flp]) -> 'OpPoly':
        if isinstance(other, (int, Flp)):
            scalar = int(other)
            return OpPoly(self.ctx, {w: c * scalar for w, c in self._terms.items()}, self.mode)
        if not isinstance(other, OpPoly):
            return NotImplemented
        self._check_compatible(other)
        result = OpPoly.zero(self.ctx, self.mode)
        for left, c1 in self._terms.items():
            for right, c2 in other._terms.items():
                result._add(left + right, c1 * c2)
        return result

    def __rmul__(self, other: Union[int, Flp]) -> 'OpPoly':
        if isinstance(other, (int, Flp)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, OpPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.mode is other.mode and self._terms == other._terms

    def __hash__(self):
        return hash((self.ctx, self.mode, frozenset(self._terms.items())))

    def __repr__(self):
        return f"OpPoly({format_poly(self)!r}, ell={self.ctx.ell}, mode={self.mode.value})"


def format_poly(poly: OpPoly) -> str:
    """Render as 'c word + c word'; coefficient 1 omitted, '0' for zero."""
    if poly.is_zero():
        return '0'
    parts = []
    for word, coeff in poly.terms():
        text = format_word(word)
        if coeff != 1:
            text = f"{coeff} {text}" if word else str(coeff)
        parts.append(text)
    return ' + '.join(parts)


# ---------------------------------------------------------------------------
# Admissible sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibleSeq:
    """
    Operation word index I = (ε₀, s₁, ε₁, …, s_k, ε_k).

    For Sq-sequences at ℓ=2 only s is used and eps is empty.
    Odd-style sequences (nonempty eps) are also used at ℓ=2 by the
    conjecture enumerator.
    """
    eps: Tuple[int, ...] = ()
    s: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'eps', tuple(self.eps))
        object.__setattr__(self, 's', tuple(self.s))
        if self.eps and len(self.eps) != len(self.s) + 1:
            raise ValidationError(f"need len(eps) = len(s)+1, got {self.eps} and {self.s}")
        if any(e not in (0, 1) for e in self.eps):
            raise ValidationError(f"ε entries must be 0 or 1, got {self.eps}")
        if any(x < 1 for x in self.s):
            raise ValidationError(f"s entries must be ≥ 1, got {self.s}")

    @property
    def odd_style(self) -> bool:
        return bool(self.eps)

    @property
    def length(self) -> int:
        return len(self.s)

    @property
    def leading_bockstein(self) -> int:
        return self.eps[0] if self.eps else 0

    @classmethod
    def identity(cls, ctx: PrimeContext) -> 'AdmissibleSeq':
        return cls((0,), ()) if ctx.is_odd else cls((), ())

    @classmethod
    def from_flat(cls, flat, ctx: PrimeContext) -> 'AdmissibleSeq':
        """
        (ε₀, s₁, ε₁, …) at odd ℓ, the plain s-tuple at ℓ=2.

        Examples:
            AdmissibleSeq.from_flat((0, 3, 0, 1, 1), PrimeContext(3))   # P3 P1 beta
            AdmissibleSeq.from_flat((2, 1), PrimeContext(2))            # Sq2 Sq1
        """
        flat = tuple(flat)
        if not ctx.is_odd:
            return cls((), flat)
        if not flat:
            return cls((0,), ())
        if len(flat) % 2 != 1:
            raise ValidationError(f"odd-ℓ sequence needs odd length, got {flat}")
        return cls(flat[0::2], flat[1::2])

    def flat(self) -> Tuple[int, ...]:
        if not self.eps:
            return self.s
        out = [self.eps[0]]
        for s_j, e_j in zip(self.s, self.eps[1:]):
            out.extend((s_j, e_j))
        return tuple(out)

    def to_letters(self, ctx: PrimeContext) -> Word:
        if not self.eps:
            return tuple(Sq(x) for x in self.s)
        letters: List[Letter] = [BETA] * self.eps[0]
        for s_j, e_j in zip(self.s, self.eps[1:]):
            letters.append(P(s_j))
            letters.extend([BETA] * e_j)
        return tuple(letters)

    @classmethod
    def from_letters(cls, word: Word, ctx: PrimeContext) -> 'AdmissibleSeq':
        """
        Read a β/P word (odd ℓ) or Sq word (ℓ=2) back into a sequence.

        Raises:
            ValidationError: on ββ, P⁰ letters or letters from the wrong family
        """
        word = tuple(word)
        if not ctx.is_odd:
            if any(letter.kind is not LetterKind.SQ or letter.n < 1 for letter in word):
                raise ValidationError(f"not a Sq-word: {format_word(word)}")
            return cls((), tuple(letter.n for letter in word))
        eps, s = [0], []
        for letter in word:
            if letter.is_beta:
                if eps[-1]:
                    raise ValidationError("ββ is zero and has no sequence")
                eps[-1] = 1
            elif letter.kind is LetterKind.P and letter.n >= 1:
                s.append(letter.n)
                eps.append(0)
            else:
                raise ValidationError(f"letter {letter} has no place in an admissible sequence")
        return cls(tuple(eps), tuple(s))

    def __str__(self):
        return str(self.flat())


def is_admissible(seq: AdmissibleSeq, ctx: PrimeContext) -> bool:
    """s_i ≥ ℓ·s_{i+1} + ε_i (odd-style) or s_i ≥ 2·s_{i+1} (Sq-sequences)."""
    s = seq.s
    if seq.odd_style:
        return all(s[i] >= ctx.ell * s[i + 1] + seq.eps[i + 1] for i in range(len(s) - 1))
    return all(s[i] >= 2 * s[i + 1] for i in range(len(s) - 1))


def excess(seq: AdmissibleSeq, ctx: PrimeContext) -> int:
    """
    e(I) = 2Σ(s_i − ℓs_{i+1} − ε_i) + Σε_i, resp. s₁ − Σ_{i>1} s_i for Sq-sequences.
    """
    s = seq.s
    if not seq.odd_style:
        return s[0] - sum(s[1:]) if s else 0
    padded = s + (0,)
    body = sum(padded[i] - ctx.ell * padded[i + 1] - seq.eps[i + 1] for i in range(len(s)))
    return 2 * body + sum(seq.eps)


class DegreeWeight(NamedTuple):
    delta_degree: int
    multiplier: int
    relative_weight: int


def degree_weight(seq: AdmissibleSeq, ctx: PrimeContext) -> DegreeWeight:
    """
    Degree shift and weight multiplier ℓ^k of P^I (k = number of power letters);
    relative_weight is ℓ^k − 1.
    """
    if seq.odd_style:
        delta = sum(2 * x * (ctx.ell - 1) for x in seq.s) + sum(seq.eps)
    else:
        delta = sum(seq.s)
    multiplier = ctx.ell ** seq.length
    return DegreeWeight(delta, multiplier, multiplier - 1)


def sequence_degree(seq: AdmissibleSeq, ctx: PrimeContext) -> int:
    return degree_weight(seq, ctx).delta_degree


def admissible_sequences(max_delta: int, ctx: PrimeContext, max_excess: Optional[int] = None,
                         odd_style: Optional[bool] = None) -> List[AdmissibleSeq]:
    """
    All admissible sequences with degree shift ≤ max_delta (and excess ≤ max_excess).

    Sequences grow by prepending a power letter on the left; excess never
    decreases under prepending, so branches over the excess bound are cut.
    Output is sorted by (degree, flat tuple).
    """
    if odd_style is None:
        odd_style = ctx.is_odd
    found: List[Tuple[int, AdmissibleSeq]] = []
    if max_delta < 0:
        return []

    def within_excess(seq):
        return max_excess is None or excess(seq, ctx) <= max_excess

    if odd_style:
        q = 2 * (ctx.ell - 1)

        def grow(seq: AdmissibleSeq, delta: int):
            found.append((delta, seq))
            lower = ctx.ell * seq.s[0] + seq.eps[0] if seq.s else max(1, seq.eps[0])
            new_s = lower
            while delta + q * new_s <= max_delta:
                base = AdmissibleSeq((0,) + seq.eps, (new_s,) + seq.s)
                if not within_excess(base):
                    break
                for new_e in (0, 1):
                    cand = base if new_e == 0 else AdmissibleSeq((1,) + seq.eps, (new_s,) + seq.s)
                    new_delta = delta + q * new_s + new_e
                    if new_delta <= max_delta and within_excess(cand):
                        grow(cand, new_delta)
                new_s += 1

        for e0 in (0, 1):
            start = AdmissibleSeq((e0,), ())
            if e0 <= max_delta and within_excess(start):
                grow(start, e0)
    else:
        def grow_sq(seq: AdmissibleSeq, delta: int):
            found.append((delta, seq))
            new_s = 2 * seq.s[0] if seq.s else 1
            while delta + new_s <= max_delta:
                cand = AdmissibleSeq((), (new_s,) + seq.s)
                if not within_excess(cand):
                    break
                grow_sq(cand, delta + new_s)
                new_s += 1

        grow_sq(AdmissibleSeq((), ()), 0)

    found.sort(key=lambda item: (item[0], item[1].flat()))
    return [seq for _, seq in found]


def admissible_basis(degree: int, ctx: PrimeContext) -> List[Word]:
    """Admissible words of exactly the given internal degree."""
    return [seq.to_letters(ctx) for seq in admissible_sequences(degree, ctx)
            if sequence_degree(seq, ctx) == degree]


# ---------------------------------------------------------------------------
# Adem rewriting
# ---------------------------------------------------------------------------

def _finish(word: Word, mode: Mode) -> Word:
    """Drop P⁰/Sq⁰ outside motivic mode."""
    if mode.keeps_frobenius:
        return word
    return tuple(letter for letter in word if not letter.is_frobenius)


def prepare_word(word: Word, ctx: PrimeContext, mode: Mode) -> Optional[Word]:
    """
    Validate a word for the Adem engine and bring it to the engine's alphabet.

    Returns None when the word is zero (ββ).

    Raises:
        AdemReductionError: formal Voevodsky letters, or β mixed with Sq at ℓ=2 in motivic mode
        ValidationError: negative indices or letters from the other prime's family
    """
    word = tuple(word)
    for letter in word:
        if letter.is_voevodsky:
            raise AdemReductionError("formal Voevodsky letters cannot be Adem-reduced in this module")
        if letter.n < 0:
            raise ValidationError(f"negative operation index in {letter}")
    if ctx.is_odd:
        if any(letter.kind is LetterKind.SQ for letter in word):
            raise ValidationError("Sq letters require ℓ=2; use beta and P letters")
    else:
        if any(letter.kind is LetterKind.P for letter in word):
            raise ValidationError("P letters require odd ℓ; use Sq letters at ℓ=2")
        has_beta = any(letter.is_beta for letter in word)
        if has_beta and mode.keeps_frobenius:
            if any(letter.kind is LetterKind.SQ for letter in word):
                raise AdemReductionError("β and Sq letters cannot be mixed at ℓ=2 in motivic mode")
        elif has_beta:
            word = tuple(Sq(1) if letter.is_beta else letter for letter in word)
    if _has_double_beta(word):
        return None
    return _finish(word, mode)


def _adem_pp(a: int, b: int, ctx: PrimeContext) -> List[Tuple[Word, int]]:
    """P^aP^b = Σ_t (−1)^{a+t} C((ℓ−1)(b−t)−1, a−tℓ) P^{a+b−t}P^t, a < ℓb."""
    ell = ctx.ell
    out = []
    for t in range(a // ell + 1):
        c = signed(a + t) * int(binom((ell - 1) * (b - t) - 1, a - t * ell, ctx))
        if c % ell:
            out.append(((P(a + b - t), P(t)), c))
    return out


def _adem_pbp(a: int, b: int, ctx: PrimeContext) -> List[Tuple[Word, int]]:
    """
    P^aβP^b, a ≤ ℓb:
      Σ_t (−1)^{a+t} C((ℓ−1)(b−t), a−tℓ) βP^{a+b−t}P^t
    + Σ_t (−1)^{a+t+1} C((ℓ−1)(b−t)−1, a−tℓ−1) P^{a+b−t}βP^t
    """
    ell = ctx.ell
    out = []
    for t in range(a // ell + 1):
        c = signed(a + t) * int(binom((ell - 1) * (b - t), a - t * ell, ctx))
        if c % ell:
            out.append(((BETA, P(a + b - t), P(t)), c))
    for t in range((a - 1) // ell + 1 if a >= 1 else 0):
        c = signed(a + t + 1) * int(binom((ell - 1) * (b - t) - 1, a - t * ell - 1, ctx))
        if c % ell:
            out.append(((P(a + b - t), BETA, P(t)), c))
    return out


def _adem_sq(a: int, b: int, ctx: PrimeContext) -> List[Tuple[Word, int]]:
    """Sq^aSq^b = Σ_t C(b−t−1, a−2t) Sq^{a+b−t}Sq^t, a < 2b."""
    out = []
    for t in range(a // 2 + 1):
        if int(binom(b - t - 1, a - 2 * t, ctx)):
            out.append(((Sq(a + b - t), Sq(t)), 1))
    return out


def _rewrite_once(word: Word, ctx: PrimeContext) -> Optional[List[Tuple[Word, int]]]:
    """
    Apply the leftmost applicable rule. None when the word is already in normal form.
    """
    ell = ctx.ell
    for i in range(len(word) - 1):
        x, y = word[i], word[i + 1]
        if x.is_beta and y.is_beta:
            return []
        if x.kind is LetterKind.P:
            if x.n == 0 and y.is_beta:
                return [(word[:i] + (BETA, x) + word[i + 2:], 1)]
            if y.kind is LetterKind.P and x.n < ell * y.n:
                return [(word[:i] + w + word[i + 2:], c) for w, c in _adem_pp(x.n, y.n, ctx)]
            if (y.is_beta and i + 2 < len(word) and word[i + 2].kind is LetterKind.P
                    and x.n <= ell * word[i + 2].n):
                return [(word[:i] + w + word[i + 3:], c)
                        for w, c in _adem_pbp(x.n, word[i + 2].n, ctx)]
        elif x.kind is LetterKind.SQ and y.kind is LetterKind.SQ and x.n < 2 * y.n:
            return [(word[:i] + w + word[i + 2:], c) for w, c in _adem_sq(x.n, y.n, ctx)]
    return None


def split_trailing_frobenius(word: Word) -> Tuple[Word, int]:
    """(core, count) where the word is core followed by `count` P⁰ letters."""
    end = len(word)
    while end > 0 and word[end - 1].is_frobenius:
        end -= 1
    return word[:end], len(word) - end


def adem_reduce(poly: OpPoly, ctx: Optional[PrimeContext] = None,
                mode: Optional[Mode] = None) -> OpPoly:
    """
    Reduce every word to admissible normal form.

    Args:
        poly: input polynomial
        ctx: prime context (defaults to poly.ctx)
        mode: rewriting mode (defaults to poly.mode)

    Returns:
        OpPoly: admissible words; in motivic mode each word is an admissible
        word followed by a block of P⁰ letters

    Raises:
        AdemReductionError: formal Voevodsky letters in the input
        NormalFormError: a P⁰ letter that could not be moved to the trailing block
    """
    ctx = ctx or poly.ctx
    mode = Mode(mode) if mode is not None else poly.mode
    pending: Dict[Word, int] = {}
    for word, coeff in poly.as_dict().items():
        prepared = prepare_word(word, ctx, mode)
        if prepared is not None:
            pending[prepared] = (pending.get(prepared, 0) + coeff) % ctx.ell

    result = OpPoly.zero(ctx, mode)
    steps = 0
    while pending:
        word, coeff = pending.popitem()
        if coeff % ctx.ell == 0:
            continue
        rewritten = _rewrite_once(word, ctx)
        if rewritten is None:
            result._add(word, coeff)
            continue
        steps += 1
        measure = rewrite_measure(word)
        for new_word, c in rewritten:
            new_word = _finish(new_word, mode)
            if rewrite_measure(new_word) >= measure:
                raise AdemReductionError(f"rewriting {format_word(word)} did not lower the termination measure")
            pending[new_word] = (pending.get(new_word, 0) + coeff * c) % ctx.ell

    for word in result.words():
        core, _ = split_trailing_frobenius(word)
        if any(letter.is_frobenius for letter in core):
            raise NormalFormError(f"P⁰ letter could not be moved to the trailing block in {format_word(word)}")
    logger.debug(f"Adem reduction finished after {steps} rewrite(s), {len(result)} term(s)")
    return result


def adem_relation(a: int, b: int, ctx: PrimeContext, bockstein: bool = False,
                  mode: Mode = Mode.CLASSICAL) -> OpPoly:
    """
    Right-hand side of a single Adem relation: P^aP^b, P^aβP^b or Sq^aSq^b.

    Example:
        >>> format_poly(adem_relation(2, 2, PrimeContext(2)))
        'Sq3 Sq1'
    """
    if ctx.is_odd:
        word = (P(a), BETA, P(b)) if bockstein else (P(a), P(b))
    else:
        word = (Sq(a), Sq(b))
    return adem_reduce(OpPoly.word(ctx, word, mode=mode))


def is_admissible_word(word: Word, ctx: PrimeContext) -> bool:
    """Admissibility of a word, ignoring a trailing P⁰ block."""
    core, _ = split_trailing_frobenius(tuple(word))
    try:
        seq = AdmissibleSeq.from_letters(core, ctx)
    except ValidationError:
        return False
    return is_admissible(seq, ctx)


# ---------------------------------------------------------------------------
# Unstable evaluation and Cartan expansion
# ---------------------------------------------------------------------------

class UnstableKind(str, Enum):
    ZERO = 'zero'
    POWER = 'power'
    BASIS = 'basis'


@dataclass(frozen=True)
class UnstableValue:
    """
    Result of evaluating P^I on ι_n.

    ZERO: P^I ι_n = 0. POWER: P^I ι_n = (P^{seq} ι_n)^{exponent}.
    BASIS: P^I ι_n is a free generator.
    """
    kind: UnstableKind
    seq: Optional[AdmissibleSeq] = None
    exponent: int = 1


def unstable_evaluate(seq: AdmissibleSeq, n: int, ctx: PrimeContext) -> UnstableValue:
    """
    Classify P^I ι_n by excess: Zero if e(I)>n; Power(I′, ℓ) if e(I)=n and
    ε₀=0 (I′ drops the leading power letter); Basis otherwise.

    Raises:
        ValidationError: I not admissible (reduce first)
    """
    if not is_admissible(seq, ctx):
        raise ValidationError(f"sequence {seq} is not admissible; reduce first")
    e = excess(seq, ctx)
    if e > n:
        return UnstableValue(UnstableKind.ZERO)
    if e == n and seq.s and seq.leading_bockstein == 0:
        if seq.odd_style:
            rest = AdmissibleSeq(seq.eps[1:], seq.s[1:])
        else:
            rest = AdmissibleSeq((), seq.s[1:])
        return UnstableValue(UnstableKind.POWER, rest, ctx.ell)
    return UnstableValue(UnstableKind.BASIS, seq)


def cartan_expand(letter: Letter, ctx: PrimeContext) -> List[Tuple[Letter, Letter]]:
    """
    P^a(uv) = Σ_{s+t=a} P^s(u)P^t(v), likewise for Sq^a; pairs for s ascending,
    all coefficients 1.
    """
    if not letter.is_power:
        raise ValidationError(f"Cartan expansion applies to P and Sq letters, not {letter}")
    if letter.n < 0:
        raise ValidationError(f"negative operation index in {letter}")
    make = P if letter.kind is LetterKind.P else Sq
    return [(make(s), make(letter.n - s)) for s in range(letter.n + 1)]
