"""Root modules and the action of Fourier coefficients on them.

A root function assigns a depth r(i, j) >= 0 to every matrix position, with
r(i, i) > 0 and the subadditivity r(i, j) + r(j, k) >= r(i, k); the span of
the e_ij[u] with u >= r(i, j) is then a subalgebra of gl_n[[t]] on which the
central extension splits.  The root module it induces is generated by a
vector v_0 with e_ij[u].v_0 = 0 for u >= r(i, j), and has a PBW basis of
ordered creation monomials (factors e_ij[u] with u < r(i, j), sorted by
degree then index) applied to v_0.

Generators act by straightening: annihilators commute rightwards through a
creation word until they reach v_0, collecting bracket and central terms on
the way; at the critical level the central element acts as 1 and all results
are exact.

States (vacuum-module vectors, i.e. words of negative-degree generators) act
through their fields.  The field of x[-m-1] is the m-th divided z-derivative
of the field of x[-1], with coefficients

    (x[-m-1])_(p) = (-1)^m binom(p, m) x[p - m],

and the field of a product state is the normally ordered product, giving the
recursion

    (x[-m-1] B)_(s) v = sum_{p <= -1} c_p x[p-m] (B_(s-p-1) v)
                      + sum_{p >= 0} c_p B_(s-p-1) (x[p-m] v),

with c_p the coefficient above.  Both sums are truncated by certified
annihilation bounds derived from the basic vanishing rule: a word
x_{n_1} ... x_{n_k} kills v_0 whenever sum n_i >= sum r(alpha_i).  Every
truncation is certified, never heuristic, so reported zeroes are exact.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .algebra import AffineAlgebra, BilinearForm, Gen, gen_from_str, gen_sort_key
from .errors import DomainError, ValidationError
from .laurent import LaurentElement, scalar_from_str, scalar_to_str
from .pbw import NCPoly
from .sugawara import ss_vectors
from .diffop import Oper, irregularity


def _gbinom(top, k):
    """binom(top, k) for any integer top and k >= 0, as an exact integer."""
    if k < 0:
        return 0
    value = 1
    for step in range(k):
        value *= top - step
    return value // math.factorial(k)


class RootFunction:
    """Depth function r(i, j) on the full index square {1..n}^2."""

    def __init__(self, n, values, kind="custom", params=None, _allow_zero_diagonal=False):
        self.n = n
        self._values = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                try:
                    v = int(values[(i, j)])
                except KeyError as exc:
                    raise ValidationError(f"missing depth at {(i, j)}") from exc
                self._values[(i, j)] = v
        self.kind = kind
        self.params = dict(params or {})
        self._validate(_allow_zero_diagonal)

    def _validate(self, allow_zero_diagonal):
        n = self.n
        for (i, j), v in self._values.items():
            if v < 0:
                raise ValidationError(f"negative depth r{(i, j)} = {v}")
            if i == j and v == 0 and not allow_zero_diagonal:
                raise ValidationError(f"diagonal depth r{(i, i)} must be positive")
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    if self(i, j) + self(j, k) < self(i, k):
                        raise ValidationError(
                            f"subadditivity fails: r{(i, j)}+r{(j, k)} < r{(i, k)}"
                        )

    def __call__(self, i, j):
        return self._values[(i, j)]

    def __eq__(self, other):
        if not isinstance(other, RootFunction):
            return NotImplemented
        return self.n == other.n and self._values == other._values

    def describe(self):
        def fmt(value):
            if isinstance(value, tuple):
                return "(" + ", ".join(str(c) for c in value) + ")"
            return str(value)

        inner = ", ".join(f"{k}={fmt(v)}" for k, v in sorted(self.params.items()))
        return f"{self.kind}(n={self.n}{', ' + inner if inner else ''})"

    __repr__ = describe

    def as_matrix(self):
        return [
            [self(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)
        ]

    def threshold(self, ell):
        """Theoretical vanishing threshold for the degree-l operators (or None)."""
        if self.kind == "constant":
            return ell * self.params["m"]
        if self.kind == "km0":
            return self.params["m"] + ell - 1
        if self.kind == "moy-prasad":
            return math.ceil((self.params["r"] + 1) * ell)
        return None


def root_fn_constant(n, m):
    """r(i, j) = m everywhere: the congruence subalgebra t^m gl_n[[t]]."""
    if m <= 0:
        raise DomainError("congruence depth m must be positive")
    values = {(i, j): m for i in range(1, n + 1) for j in range(1, n + 1)}
    return RootFunction(n, values, "constant", {"m": m})


def root_fn_km0(n, m):
    """Depth m on the whole bottom row, 0 on the last column above it, 1 elsewhere."""
    if m <= 0:
        raise DomainError("conductor depth m must be positive")
    values = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == n:
                values[(i, j)] = m
            elif j == n:
                values[(i, j)] = 0
            else:
                values[(i, j)] = 1
    return RootFunction(n, values, "km0", {"m": m})


def root_fn_moy_prasad(n, x, r):
    """r(i, j) = 1 - ceil(x_i - x_j - r) off the diagonal, 1 + floor(r) on it."""
    x = [Fraction(c) for c in x]
    r = Fraction(r)
    if len(x) != n:
        raise ValidationError("point must have one coordinate per row")
    if r < 0:
        raise ValidationError("depth parameter r must be nonnegative")
    values = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                values[(i, j)] = 1 + math.floor(r)
            else:
                values[(i, j)] = 1 - math.ceil(x[i - 1] - x[j - 1] - r)
    return RootFunction(n, values, "moy-prasad", {"x": tuple(x), "r": r})


def _vacuum_root_fn(n):
    # Internal: r = 0 everywhere realizes the vacuum module gl_n[[t]].v_0 = 0.
    values = {(i, j): 0 for i in range(1, n + 1) for j in range(1, n + 1)}
    return RootFunction(n, values, "vacuum", {}, _allow_zero_diagonal=True)


class ModuleVector:
    """Finite rational combination of ordered creation monomials applied to v_0."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        table = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for word, c in items:
                c = Fraction(c)
                if c:
                    word = tuple(word)
                    table[word] = table.get(word, Fraction(0)) + c
                    if not table[word]:
                        del table[word]
        self._terms = table

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def vacuum(cls):
        return cls({(): Fraction(1)})

    def items(self):
        return sorted(
            self._terms.items(),
            key=lambda kv: (len(kv[0]), [gen_sort_key(g) for g in kv[0]]),
        )

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        table = dict(self._terms)
        for word, c in other._terms.items():
            table[word] = table.get(word, Fraction(0)) + c
        return ModuleVector(table)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = Fraction(scalar)
        if not scalar:
            return ModuleVector.zero()
        return ModuleVector({w: c * scalar for w, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self._terms == other._terms

    def freeze(self):
        return tuple(sorted(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for word, c in self.items():
            body = "*".join(repr(g) for g in word) if word else "v0"
            if word:
                body += "*v0"
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def to_json(self):
        return [
            {"coeff": scalar_to_str(c), "word": [repr(g) for g in word]}
            for word, c in self.items()
        ]

    @classmethod
    def from_json(cls, data):
        terms = []
        for entry in data:
            word = tuple(gen_from_str(tok) for tok in entry["word"])
            terms.append((word, scalar_from_str(entry["coeff"])))
        return cls(terms)


def _state_words(state):
    """Normalize a state to {word: coeff}; words must have negative degrees."""
    if isinstance(state, NCPoly):
        words = state.words()
    elif isinstance(state, ModuleVector):
        words = dict(state._terms)
    elif isinstance(state, dict):
        words = {tuple(w): Fraction(c) for w, c in state.items()}
    elif isinstance(state, (tuple, list)):
        words = {tuple(state): Fraction(1)}
    else:
        raise ValidationError(f"cannot interpret state {state!r}")
    for word in words:
        for g in word:
            if not isinstance(g, Gen):
                raise ValidationError("states contain loop generators only")
            if g.u >= 0:
                raise ValidationError(
                    f"state factor {g!r} has nonnegative degree; states live in"
                    " strictly negative degrees"
                )
    return words


class RootModule:
    """The induced module for a root function, with exact generator action.

    The level defaults to critical; any other level is accepted for sanity
    experiments, but no centrality or vanishing statement is claimed there.
    Straightening and field actions are memoized per instance, so reuse one
    RootModule across a computation.
    """

    def __init__(self, rf, level=Fraction(-1, 2)):
        self.rf = rf
        self.algebra = AffineAlgebra(rf.n, BilinearForm(rf.n, level))
        self._act_cache = {}
        self._fourier_cache = {}
        # The basic vanishing rule (degree sum >= depth sum kills v_0) needs
        # positive diagonal depths: a central contraction removes a pair of
        # opposite factors of total degree zero and total depth at least
        # r(i, i), so with a zero diagonal the empty word is reachable on the
        # boundary and the rule must be padded by one.
        self._lemma_slack = (
            0 if all(rf(i, i) > 0 for i in range(1, rf.n + 1)) else 1
        )

    # -- creation data -----------------------------------------------------

    def vacuum_vector(self):
        return ModuleVector.vacuum()

    def is_creation(self, g):
        return g.u < self.rf(g.i, g.j)

    def creation_shift(self, vec):
        """max over monomials of sum (r(i,j) - u) over factors; 0 for v_0."""
        best = 0
        for word in vec._terms:
            best = max(
                best, sum(self.rf(g.i, g.j) - g.u for g in word)
            )
        return best

    # -- generator action --------------------------------------------------

    def act(self, g, vec):
        """Exact action of e_ij[u] on a module vector, in creation-basis form."""
        if not isinstance(g, Gen):
            raise ValidationError("act expects a loop generator")
        out = {}
        for word, c in vec._terms.items():
            for w2, c2 in self._act_word(g, word).items():
                out[w2] = out.get(w2, Fraction(0)) + c * c2
                if not out[w2]:
                    del out[w2]
        return ModuleVector(out)

    def _act_word(self, g, word):
        key = (g, word)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        creation = self.is_creation(g)
        if not word:
            result = {(g,): Fraction(1)} if creation else {}
            self._act_cache[key] = result
            return result
        head = word[0]
        if creation and gen_sort_key(g) <= gen_sort_key(head):
            result = {(g,) + word: Fraction(1)}
            self._act_cache[key] = result
            return result
        # g h = h g + [g, h]
        tail = word[1:]
        out = {}

        def accumulate(mapping, scale):
            for w, c in mapping.items():
                out[w] = out.get(w, Fraction(0)) + c * scale
                if not out[w]:
                    del out[w]

        moved = self._act_word(g, tail)
        for w, c in moved.items():
            accumulate(self._act_word(head, w), c)
        lie, central = self.algebra.bracket(g, head)
        for gen2, c in lie:
            accumulate(self._act_word(gen2, tail), c)
        if central:
            accumulate({tail: Fraction(1)}, central)
        self._act_cache[key] = out
        return out

    def act_word(self, word, vec):
        """Apply a word of generators, rightmost factor first."""
        for g in reversed(tuple(word)):
            if vec.is_zero():
                return vec
            vec = self.act(g, vec)
        return vec

    def act_poly(self, poly, vec):
        """Apply a tau-free NC polynomial (PBW-ordered words act as written)."""
        total = ModuleVector.zero()
        for word, c in poly.words().items():
            total = total + self.act_word(word, vec).scale(c)
        return total

    # -- certified annihilation bounds --------------------------------------

    def word_annihilation_bound(self, word, vec):
        """Certified N with word_(s) vec = 0 for all s >= N.

        For a nonempty word x_{n_1} ... x_{n_k} acting on a creation
        monomial, every expansion term is a word of generator modes summing
        to sum n_i + s + 1, so the basic vanishing rule kills everything as
        soon as s >= sum r(alpha_i) - sum n_i - 1 + shift(vec), where
        shift(vec) collects (r - u) over the creation factors of vec.  This
        sharpens by one the naive per-factor count, which is not a valid
        bound: reordering corrections inside a field expansion can land
        exactly on the boundary.
        """
        if vec.is_zero():
            return 0
        if not word:
            return 0  # the vacuum field is the identity: only s = -1 acts
        shift = self.creation_shift(vec)
        return (
            sum(self.rf(g.i, g.j) for g in word)
            - sum(g.u for g in word)
            - 1
            + shift
            + self._lemma_slack
        )

    def annihilation_bound(self, state, vec):
        """Certified N with state_(s) vec = 0 for all s >= N."""
        words = _state_words(state)
        if not words:
            return 0
        return max(self.word_annihilation_bound(w, vec) for w in words)

    def generator_annihilation_degree(self, g, vec):
        """Certified J with e_ij[u] vec = 0 for all u >= J."""
        return self.rf(g.i, g.j) + self.creation_shift(vec) + self._lemma_slack

    # -- Fourier action ------------------------------------------------------

    def fourier_act(self, state, s, vec, on_term=None):
        """The s-th Fourier coefficient of the field of a state, applied to vec.

        ``on_term`` (optional) receives, for every surviving expansion path,
        the operator word as a tuple of (generator index pair, mode) entries
        in left-to-right operator order, together with its coefficient.
        """
        words = _state_words(state)
        total = ModuleVector.zero()
        for word, c in words.items():
            if on_term is None:
                part = self._fourier_word(word, s, vec)
            else:
                part = self._fourier_word_traced(word, s, vec, c, (), (), on_term)
            total = total + part.scale(c)
        return total

    def _fourier_word(self, word, s, vec):
        if vec.is_zero():
            return ModuleVector.zero()
        if not word:
            return vec if s == -1 else ModuleVector.zero()
        key = (word, s, vec.freeze())
        hit = self._fourier_cache.get(key)
        if hit is not None:
            return hit
        head, tail = word[0], word[1:]
        m = -head.u - 1
        total = ModuleVector.zero()
        # creation side: p <= -1, head mode p - m applied after the tail field
        if tail:
            tail_bound = self.word_annihilation_bound(tail, vec)
            lo = s - tail_bound
        else:
            lo = s  # the vacuum field only acts at index -1
        for p in range(lo, 0):
            inner = self._fourier_word(tail, s - p - 1, vec)
            if inner.is_zero():
                continue
            coeff = Fraction((-1) ** (m % 2) * _gbinom(p, m))
            total = total + self.act(Gen(head.i, head.j, p - m), inner).scale(coeff)
        # annihilation side: p >= m (binomial vanishes below), head acts first
        hi = m + self.generator_annihilation_degree(head, vec)
        for p in range(m, hi):
            coeff = Fraction((-1) ** (m % 2) * _gbinom(p, m))
            if not coeff:
                continue
            moved = self.act(Gen(head.i, head.j, p - m), vec)
            if moved.is_zero():
                continue
            total = total + self._fourier_word(tail, s - p - 1, moved).scale(coeff)
        self._fourier_cache[key] = total
        return total

    def _fourier_word_traced(self, word, s, vec, coeff, left, right, on_term):
        # Same recursion with the expansion trace threaded through; used by
        # diagnostics and the shape tests, not on hot paths.
        if vec.is_zero():
            return ModuleVector.zero()
        if not word:
            if s == -1:
                on_term(left + right, coeff)
                return vec
            return ModuleVector.zero()
        head, tail = word[0], word[1:]
        m = -head.u - 1
        total = ModuleVector.zero()
        if tail:
            lo = s - self.word_annihilation_bound(tail, vec)
        else:
            lo = s
        for p in range(lo, 0):
            c = Fraction((-1) ** (m % 2) * _gbinom(p, m))
            mode = Gen(head.i, head.j, p - m)
            inner = self._fourier_word_traced(
                tail, s - p - 1, vec, coeff * c, left + (mode,), right, on_term
            )
            if not inner.is_zero():
                total = total + self.act(mode, inner).scale(c)
        hi = m + self.generator_annihilation_degree(head, vec)
        for p in range(m, hi):
            c = Fraction((-1) ** (m % 2) * _gbinom(p, m))
            if not c:
                continue
            mode = Gen(head.i, head.j, p - m)
            moved = self.act(mode, vec)
            if moved.is_zero():
                continue
            total = total + self._fourier_word_traced(
                tail, s - p - 1, moved, coeff * c, left, (mode,) + right, on_term
            ).scale(c)
        return total


# -- module-level operations ---------------------------------------------


def act_generator(g, vec, rf):
    """One-shot generator action; build a RootModule for repeated use."""
    return RootModule(rf).act(g, vec)


def lemma_relations_bound(word, rf):
    """Whether sum of degrees >= sum of depths, which forces word.v_0 = 0."""
    degrees = 0
    depths = 0
    for entry in word:
        g = entry if isinstance(entry, Gen) else Gen(*entry)
        degrees += g.u
        depths += rf(g.i, g.j)
    return degrees >= depths


def fourier_act(state, s, vec, rf, on_term=None):
    return RootModule(rf).fourier_act(state, s, vec, on_term=on_term)


def annihilation_bound(state, vec, rf):
    return RootModule(rf).annihilation_bound(state, vec)


def vacuum_module(n):
    """The vacuum module gl_n[[t]].v_0 = 0 at critical level.

    States are its vectors; acting with Fourier coefficients here realizes
    products inside the vertex algebra itself.
    """
    return RootModule(_vacuum_root_fn(n))


def state_is_central(state, n):
    """Exact membership test for the centre of the vacuum vertex algebra.

    A state lies in the centre iff e_ij[u] kills it for every u >= 0; every
    vacuum vector is killed from a certified mode bound on, so checking the
    finitely many modes below it decides membership completely.
    """
    mod = vacuum_module(n)
    words = _state_words(state)
    vec = ModuleVector.zero()
    for w, c in words.items():
        vec = vec + mod.act_word(w, ModuleVector.vacuum()).scale(c)
    if vec.is_zero():
        return True
    limit = mod.creation_shift(vec) + mod._lemma_slack
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for u in range(0, limit):
                if not mod.act(Gen(i, j, u), vec).is_zero():
                    return False
    return True


def ss_operator_act(n, ell, N, rf, module=None):
    """Apply the N-th Fourier coefficient of S_l to the highest vector."""
    if not 1 <= ell <= n:
        raise ValidationError(f"component index {ell} out of range 1..{n}")
    family = ss_vectors(n)
    mod = module if module is not None else RootModule(rf)
    return mod.fourier_act(family.S[ell - 1], N, ModuleVector.vacuum())


def _workers_from_env(cells):
    raw = os.environ.get("CRITCENTER_WORKERS", "").strip()
    if raw:
        try:
            requested = int(raw)
        except ValueError as exc:
            raise ValidationError(f"CRITCENTER_WORKERS must be an integer: {raw!r}") from exc
        return max(1, requested)
    return max(1, min(4, cells))


def vanishing_report(n, rf, scan_window=3):
    """Scan the Fourier coefficients of every S_l around its threshold.

    For each l the report records the theoretical threshold, whether
    vanishing at and above it is fully verified (explicit checks up to the
    certified bound, the bound covering the rest), the smallest N in the
    scanned range above which everything vanishes, and a witness vector for
    the largest nonvanishing N seen.
    """
    if rf.n != n:
        raise ValidationError("root function rank does not match n")
    family = ss_vectors(n)
    mod = RootModule(rf)
    vacuum = ModuleVector.vacuum()

    cells = []
    cell_meta = []
    for ell in range(1, n + 1):
        thr = rf.threshold(ell)
        certified = mod.annihilation_bound(family.S[ell - 1], vacuum)
        if thr is None:
            thr = certified
        lo = thr - scan_window
        hi = max(certified, thr)  # explicit checks cover [lo, hi)
        cell_meta.append((ell, thr, certified, lo, hi))
        for N in range(lo, hi):
            cells.append((ell, N))

    def compute(cell):
        ell, N = cell
        return mod.fourier_act(family.S[ell - 1], N, vacuum)

    workers = _workers_from_env(len(cells))
    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(compute, cells))
    else:
        values = [compute(cell) for cell in cells]
    results = dict(zip(cells, values))

    report = {
        "case": rf.describe(),
        "n": n,
        "scan_window": scan_window,
        "thresholds_theoretical": [],
        "certified_from": [],
        "verified": [],
        "observed_min_vanishing": [],
        "witnesses": [],
        "witness_N": [],
    }
    for ell, thr, certified, lo, hi in cell_meta:
        ok = all(results[(ell, N)].is_zero() for N in range(thr, hi))
        largest_bad = None
        for N in range(lo, hi):
            if not results[(ell, N)].is_zero():
                largest_bad = N
        observed = lo if largest_bad is None else largest_bad + 1
        witness = None if largest_bad is None else results[(ell, largest_bad)]
        report["thresholds_theoretical"].append(thr)
        report["certified_from"].append(certified)
        report["verified"].append(ok)
        report["observed_min_vanishing"].append(observed)
        report["witnesses"].append(None if witness is None else witness.to_json())
        report["witness_N"].append(largest_bad)
    return report


def conductor_irregularity_report(n, m, scan_window=3):
    """Combine the conductor-subalgebra vanishing with the pole-order calculus.

    Annihilation by the depth-m conductor subalgebra forces a_{l,N} = 0 for
    N >= m + l - 1, i.e. pole bounds -v(a_l) <= m + l - 1 for any compatible
    oper.  Feeding the bounds into the irregularity formula yields
    Irr <= m - 1, and the oper saturating every bound attains it exactly.
    """
    if m < 1:
        raise DomainError("conductor depth m must be positive")
    rf = root_fn_km0(n, m)
    vanishing = vanishing_report(n, rf, scan_window=scan_window)
    if not all(vanishing["verified"]):
        raise AssertionError(
            "internal invariant violation: conductor vanishing failed"
        )
    pole_bounds = [m + ell - 1 for ell in range(1, n + 1)]
    witness = Oper(
        [LaurentElement.monomial(-(m + ell - 1)) for ell in range(1, n + 1)]
    )
    witness_irr = irregularity(witness)
    return {
        "case": vanishing["case"],
        "n": n,
        "m": m,
        "thresholds_theoretical": vanishing["thresholds_theoretical"],
        "observed_min_vanishing": vanishing["observed_min_vanishing"],
        "witnesses": vanishing["witnesses"],
        "pole_bounds": pole_bounds,
        "witness_oper": witness.to_json(),
        "witness_irregularity": witness_irr,
        "irregularity_bound": m - 1,
        "vanishing_verified": all(vanishing["verified"]),
    }
