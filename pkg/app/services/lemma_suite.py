"""Runs every structural verifier on a matroid and collects the outcome per check.

A check records how many instances it examined and the failures it saw; it
is skipped (with a reason) when the matroid is disconnected or too large for
the exhaustive form of the check.
"""
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator

from app.config import settings
from app.errors import GroundSetTooLarge, LemmaFailure, MatroidError, PreconditionViolated, QuadrantTooSmall
from app.services import connectivity as conn
from app.services import decomposition as deco
from app.services import duality_checks as duality
from app.services import localization as loc
from app.services import separation_calculus as calc
from app.services.fixtures import corpus
from app.services.matroid_kernel import (
    Matroid,
    ValidationLevel,
    bases,
    bits,
    dual,
    from_masks,
    is_connected,
    is_independent,
    is_subset,
    popcount,
    same_matroid,
)

logger = logging.getLogger(__name__)

SUITES = ("lemmas", "duality", "all")


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class SuiteReport:
    fixture: str
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> list[str]:
        return [f"{r.name}: {failure}" for r in self.results for failure in r.failures]


class _Tally:
    def __init__(self, result: CheckResult):
        self.result = result

    def expect(self, ok: bool, detail: str) -> None:
        self.result.checked += 1
        if not ok:
            logger.error("%s: %s", self.result.name, detail)
            self.result.failures.append(detail)

    def run(self, fn: Callable, *args) -> object:
        """Call a self-verifying operation; precondition misses are not counted."""
        try:
            value = fn(*args)
        except (PreconditionViolated, QuadrantTooSmall):
            return None
        except MatroidError as exc:
            self.result.checked += 1
            self.result.failures.append(f"{type(exc).__name__}: {exc.detail}")
            return None
        self.result.checked += 1
        return value


class _Context:
    """Per-matroid data shared by the checks."""

    def __init__(self, M: Matroid):
        self.M = M
        self.connected = is_connected(M)
        self.rng = random.Random(settings.RANDOM_SEED)
        self._seps = None
        self._families = None
        self._localizations = None

    @property
    def seps(self) -> list[conn.Separation]:
        if self._seps is None:
            self._seps = conn.enumerate_2separations(self.M)
        return self._seps

    @property
    def sides(self) -> list[int]:
        return [side for s in self.seps for side in (s.side_a, s.side_b)]

    def families(self) -> list[list[int]]:
        """Nonempty pairwise-disjoint families of 2-separation sides.

        Every family up to LOCALIZATION_CHECK_CAP elements; above it single
        sides and disjoint pairs, cut at FAMILY_LIMIT.
        """
        if self._families is None:
            if self.M.size <= settings.LOCALIZATION_CHECK_CAP:
                self._families = list(disjoint_families(self.sides))
            else:
                self._families = self._sampled_families()
            logger.debug("%d disjoint families of 2-separation sides", len(self._families))
        return self._families

    def _sampled_families(self) -> list[list[int]]:
        families = [[side] for side in self.sides]
        families += [[a, b] for a, b in combinations(self.sides, 2) if not a & b]
        if len(families) > settings.FAMILY_LIMIT:
            logger.warning("checking %d of %d disjoint families", settings.FAMILY_LIMIT, len(families))
            families = families[: settings.FAMILY_LIMIT]
        return families

    def localizations(self) -> list[loc.Localization]:
        if self._localizations is None:
            self._localizations = []
            for family in self.families():
                try:
                    self._localizations.append(loc.localize(self.M, family))
                except LemmaFailure:
                    continue
        return self._localizations


def disjoint_families(sides: list[int]) -> Iterator[list[int]]:
    """Every nonempty family of pairwise-disjoint members of ``sides``, in index order."""
    chosen: list[int] = []

    def extend(start: int, used: int) -> Iterator[list[int]]:
        for i in range(start, len(sides)):
            if sides[i] & used:
                continue
            chosen.append(sides[i])
            yield list(chosen)
            yield from extend(i + 1, used | sides[i])
            chosen.pop()

    yield from extend(0, 0)


_CHECKS: dict[str, list[tuple[str, Callable]]] = {"lemmas": [], "duality": []}


def _check(suite: str, name: str, needs: str = ""):
    """Register a check; ``needs`` names conditions under which it runs."""

    def register(fn):
        def wrapped(ctx: _Context) -> CheckResult:
            result = CheckResult(name)
            M = ctx.M
            if "connected" in needs and not ctx.connected:
                result.skipped = "disconnected"
            elif "size3" in needs and M.size < 3:
                result.skipped = "fewer than 3 elements"
            elif "pairs" in needs and M.size > settings.SUBMODULARITY_CAP:
                result.skipped = f"more than {settings.SUBMODULARITY_CAP} elements"
            elif "local" in needs and M.size > settings.LOCALIZATION_CHECK_CAP:
                result.skipped = f"more than {settings.LOCALIZATION_CHECK_CAP} elements"
            elif "unique" in needs and M.size > settings.UNIQUENESS_CAP:
                result.skipped = f"more than {settings.UNIQUENESS_CAP} elements"
            else:
                try:
                    fn(ctx, _Tally(result))
                except GroundSetTooLarge as exc:
                    result.skipped = exc.detail
                except MatroidError as exc:
                    logger.error("%s aborted: %s", name, exc.detail)
                    result.failures.append(f"{type(exc).__name__}: {exc.detail}")
            if result.skipped:
                logger.warning("skipped %s: %s", name, result.skipped)
            return result

        _CHECKS[suite].append((name, wrapped))
        return fn

    return register


# kernel


@_check("lemmas", "circuit axioms")
def _circuit_axioms(ctx, tally):
    tally.run(from_masks, ctx.M.ground, ctx.M.circuits, ValidationLevel.FULL)


@_check("lemmas", "basis exchange")
def _basis_exchange(ctx, tally):
    all_bases = bases(ctx.M)
    if len(all_bases) > settings.DIF_BASES_EXHAUSTIVE_LIMIT:
        all_bases = all_bases[: settings.DIF_BASES_EXHAUSTIVE_LIMIT]
    for B1, B2 in combinations(all_bases, 2):
        tally.expect(popcount(B1 & ~B2) == popcount(B2 & ~B1), f"{ctx.M.labels(B1)} / {ctx.M.labels(B2)}")


@_check("lemmas", "double dual")
def _double_dual(ctx, tally):
    tally.expect(dual(dual(ctx.M)) == ctx.M, "dual of the dual differs")


@_check("lemmas", "circuit-cocircuit intersection")
def _circuit_cocircuit(ctx, tally):
    cocircuits = dual(ctx.M).circuits
    for C in ctx.M.circuits:
        for D in cocircuits:
            tally.expect(popcount(C & D) != 1, f"{ctx.M.labels(C)} meets {ctx.M.labels(D)} once")


@_check("lemmas", "rank monotone and submodular", needs="pairs")
def _rank_properties(ctx, tally):
    M = ctx.M
    for X in range(M.full + 1):
        for e in bits(M.full & ~X):
            grown = M.rank_of(X | (1 << e)) - M.rank_of(X)
            tally.expect(grown in (0, 1), f"adding {M.ground[e]!r} to {M.labels(X)}")
    for X in range(M.full + 1):
        for Y in range(X, M.full + 1):
            ok = M.rank_of(X) + M.rank_of(Y) >= M.rank_of(X | Y) + M.rank_of(X & Y)
            tally.expect(ok, f"rank on {M.labels(X)}, {M.labels(Y)}")


# connectivity


@_check("lemmas", "connectivity identities")
def _phi_identities(ctx, tally):
    M = ctx.M
    for X in range(M.full + 1):
        value = conn.phi_by_bases(M, X)
        tally.expect(value == conn.phi_rank_identity(M, X), f"rank identity on {M.labels(X)}")
        tally.expect(value == conn.phi(M, M.complement(X)), f"symmetry on {M.labels(X)}")


@_check("lemmas", "connectivity submodular", needs="pairs")
def _phi_submodular(ctx, tally):
    M = ctx.M
    values = [conn.phi(M, X) for X in range(M.full + 1)]
    for X in range(M.full + 1):
        for Y in range(X, M.full + 1):
            ok = values[X] + values[Y] >= values[X | Y] + values[X & Y]
            tally.expect(ok, f"phi on {M.labels(X)}, {M.labels(Y)}")


@_check("lemmas", "del independent of bases", needs="pairs")
def _del_invariance(ctx, tally):
    M = ctx.M
    for X in range(1, M.full + 1, 2):
        values = conn.del_invariant(M, X, settings.DEL_INVARIANCE_TRIALS, ctx.rng)
        tally.expect(len(values) == 1, f"del on {M.labels(X)} takes values {sorted(values)}")


@_check("lemmas", "nested limit", needs="connected")
def _nested_limit(ctx, tally):
    for A, B in combinations(ctx.sides, 2):
        for small, large in ((A, B), (B, A)):
            if small != large and is_subset(small, large):
                tally.run(conn.nested_limit, ctx.M, [small, large], 2)


# separation calculus


def _crossing_pairs(ctx) -> Iterator[tuple[conn.Separation, conn.Separation]]:
    for s, t in combinations(ctx.seps, 2):
        if not calc.are_nested(s, t):
            yield s, t


def _orientations(s: conn.Separation, t: conn.Separation):
    for a in (s, s.inverted()):
        for b in (t, t.inverted()):
            yield a, b


@_check("lemmas", "nestedness formulations")
def _nestedness(ctx, tally):
    for s, t in combinations(ctx.seps, 2):
        tally.expect(calc.are_nested(s, t) == calc.nested_by_containment(s, t), "quadrants against containment")


@_check("lemmas", "corner lemma", needs="connected")
def _corner(ctx, tally):
    for s, t in _crossing_pairs(ctx):
        for a, b in _orientations(s, t):
            tally.run(calc.corner, ctx.M, a, b)


@_check("lemmas", "symmetric difference lemma", needs="connected")
def _symmetric_difference(ctx, tally):
    for s, t in _crossing_pairs(ctx):
        tally.run(calc.symmetric_difference_sep, ctx.M, s, t)


@_check("lemmas", "union complement claim", needs="connected")
def _union_complement(ctx, tally):
    M = ctx.M
    for s, t in _crossing_pairs(ctx):
        for a, b in _orientations(s, t):
            X = a.side_a & b.side_a
            if popcount(X) < 2 or popcount(M.complement(X)) < 2 or conn.phi(M, X) == 1:
                continue
            outside = M.complement(a.side_a | b.side_a)
            tally.expect(popcount(outside) >= 2, f"corner {M.labels(X)}")


@_check("lemmas", "improper traces", needs="connected")
def _improper(ctx, tally):
    M = ctx.M
    for side in ctx.sides:
        s = conn.Separation(side, M.complement(side), 2)
        traces = [C & side for C in M.circuits if calc.crosses_circuit(C, s)]
        for T1 in traces:
            for T2 in traces:
                tally.expect(not (T1 != T2 and is_subset(T1, T2)), f"trace {M.labels(T1)} inside {M.labels(T2)}")


@_check("lemmas", "switching lemma", needs="connected")
def _switching(ctx, tally):
    M = ctx.M
    for s in ctx.seps:
        crossing = [C for C in M.circuits if calc.crosses_circuit(C, s)]
        for C1 in crossing:
            for C2 in crossing:
                tally.run(calc.switch_circuits, M, C1, C2, s)


@_check("lemmas", "infinite switching lemma", needs="connected")
def _infinite_switching(ctx, tally):
    M = ctx.M
    for family in ctx.families():
        crossing = [
            C for C in M.circuits
            if all(C & X and C & ~X & M.full for X in family)
        ]
        for C1 in crossing:
            for C2 in crossing:
                tally.run(calc.infinite_switch, M, C1, C2, family)


@_check("lemmas", "good separations nested", needs="connected")
def _good_nested(ctx, tally):
    good = [s for s in ctx.seps if calc.is_good(ctx.M, s, ctx.seps)]
    for s, t in combinations(good, 2):
        tally.expect(calc.are_nested(s, t), "two good separations cross")
    for s in good:
        tally.expect(calc.is_good(ctx.M, s.inverted(), ctx.seps), "goodness is not symmetric")


# localization



@_check("lemmas", "localization is a matroid", needs="connected local")
def _localization_axioms(ctx, tally):
    for family in ctx.families():
        L = tally.run(loc.localize, ctx.M, family)
        if L is not None:
            tally.run(from_masks, L.local.ground, L.local.circuits, ValidationLevel.FULL)


@_check("lemmas", "independence correspondence", needs="connected local")
def _independence(ctx, tally):
    M = ctx.M
    independents = [I for I in range(M.full + 1) if is_independent(M, I)]
    for L in ctx.localizations():
        images = {loc.local_independents_correspond(L, I) for I in independents}
        local = {J for J in range(L.local.full + 1) if is_independent(L.local, J)}
        family = [M.labels(X) for X in L.family]
        dependent = [L.local.labels(J) for J in sorted(images - local)]
        unreached = [L.local.labels(J) for J in sorted(local - images)]
        tally.expect(not dependent, f"images {dependent} are dependent at {family}")
        tally.expect(not unreached, f"{unreached} are no images of independent sets at {family}")


@_check("lemmas", "basis correspondence", needs="connected local")
def _bases(ctx, tally):
    for L in ctx.localizations():
        tally.run(loc.local_bases, L)


@_check("lemmas", "basis trace subclaims", needs="connected local")
def _basis_subclaims(ctx, tally):
    M = ctx.M
    all_bases = bases(M)
    for side in ctx.sides:
        s = conn.Separation(side, M.complement(side), 2)
        crossing = [C for C in M.circuits if calc.crosses_circuit(C, s)]
        for C1, C2 in combinations(crossing, 2):
            if is_independent(M, (C1 | C2) & side):
                tally.expect(C1 & side == C2 & side, f"traces of {M.labels(C1)}, {M.labels(C2)}")
        for B in all_bases:
            if popcount(B & side) == M.rank_of(side):
                continue
            for C in crossing:
                tally.expect(not is_subset(C & side, B), f"{M.labels(C)} traces into {M.labels(B)}")


@_check("lemmas", "separation correspondence", needs="connected local")
def _separation_correspondence(ctx, tally):
    for L in ctx.localizations():
        for S_U in range(L.local.full + 1):
            if popcount(S_U) >= 2 and popcount(L.local.complement(S_U)) >= 2:
                tally.run(loc.project_2sep, L, S_U)


@_check("lemmas", "goodness correspondence", needs="connected local")
def _goodness_correspondence(ctx, tally):
    for L in ctx.localizations():
        local_seps = conn.enumerate_2separations(L.local)
        for s in local_seps:
            for side in (s.side_a, s.side_b):
                tally.run(loc.goodness_corresponds, L, side, local_seps, ctx.seps)


@_check("lemmas", "lift of separation images", needs="connected local")
def _lift(ctx, tally):
    M = ctx.M
    for L in ctx.localizations():
        for side in ctx.sides:
            image, coimage = loc.phi_U(L, side), loc.phi_U(L, M.complement(side))
            if image & coimage:
                continue
            tally.run(loc.lift_2sep_subset, L, conn.Separation(side, M.complement(side), 2), image)


@_check("lemmas", "restriction of a localization", needs="connected local")
def _restriction_commutes(ctx, tally):
    for L in ctx.localizations():
        candidates = [L.local.full & ~(1 << i) for i in range(L.local.size)]
        candidates += [side for s in conn.enumerate_2separations(L.local) for side in (s.side_a, s.side_b)]
        for A in candidates:
            commutes = tally.run(loc.restriction_commutes, L, A)
            if commutes is False:
                tally.expect(False, f"restriction to {L.local.labels(A)}")


@_check("lemmas", "restriction of a 2-separation", needs="connected local")
def _restriction_2sep(ctx, tally):
    M = ctx.M
    for s in ctx.seps:
        for X in range(M.full + 1):
            if popcount(s.side_a & X) >= 2 and popcount(s.side_b & X) >= 2:
                tally.run(loc.restriction_2sep, M, s, X)


@_check("lemmas", "2-sum round trip", needs="connected")
def _round_trip(ctx, tally):
    M = ctx.M
    for s in ctx.seps:
        M1, M2 = loc.split_along(M, s)
        rebuilt = loc.two_sum(M1, M2, loc.shared_label(M, s))
        tally.expect(same_matroid(rebuilt, M), f"split along {M.labels(s.side_a)}")


# decomposition


@_check("lemmas", "canonical decomposition", needs="connected size3")
def _canonical(ctx, tally):
    M = ctx.M
    tree = tally.run(deco.build_tree, M)
    if tree is None:
        return
    report = deco.verify_tree_decomposition(M, tree.edge_pairs(), tree.parts)
    tally.expect(report.valid and report.uniform, "edge partitions are not uniform separations")
    if tree.edges:
        tally.expect(report.adhesion == 2 and report.irredundant is True, "not irredundant of adhesion 2")
    tally.expect(same_matroid(deco.reassemble(tree), M), "torsos do not reassemble to M")
    for v, T in tree.torsos.items():
        tally.expect(deco.is_primitive(T), f"torso {v} has a good 2-separation")
    oriented = [t for s in calc.good_2separations(M) for t in (s, s.inverted())]
    tally.expect(deco.max_chain_length(oriented) <= M.size, "chain of good separations too long")


@_check("lemmas", "primitive structure", needs="connected size3")
def _primitive_structure(ctx, tally):
    tally.run(deco.verify_primitive_structure, ctx.M)
    tree = tally.run(deco.build_tree, ctx.M)
    if tree is None:
        return
    for T in tree.torsos.values():
        report = tally.run(deco.verify_primitive_structure, T)
        if report is not None:
            tally.expect(report.primitive and report.kind is not None, "torso is not primitive")


@_check("lemmas", "separating pairs", needs="connected size3")
def _separating_pairs(ctx, tally):
    M = ctx.M
    if not ctx.seps or not deco.is_primitive(M):
        return
    # one enclosing side per pair, the first in canonical order
    for x, y in combinations(range(M.size), 2):
        X = (1 << x) | (1 << y)
        side = next((side for side in ctx.sides if is_subset(X, side)), None)
        if side is not None:
            tally.run(deco.verify_separating_pair, M, X, conn.Separation(side, M.complement(side), 2))


@_check("lemmas", "unique decomposition", needs="connected size3 unique")
def _uniqueness(ctx, tally):
    tally.run(deco.verify_uniqueness, ctx.M)


# duality


@_check("duality", "separations of the dual")
def _sep_dual(ctx, tally):
    tally.run(duality.verify_sep_dual, ctx.M)


@_check("duality", "basis differences under duality")
def _dif_bases(ctx, tally):
    M = ctx.M
    if M.size <= settings.SUBMODULARITY_CAP:
        subsets = range(M.full + 1)
    else:
        subsets = [0, M.full, *ctx.sides]
    for S in subsets:
        tally.run(duality.verify_dif_bases, M, S, None, ctx.rng)


@_check("duality", "localization of the dual", needs="connected local")
def _local_dual(ctx, tally):
    tally.run(duality.verify_local_dual, ctx.M, [])
    for family in ctx.families():
        tally.run(duality.verify_local_dual, ctx.M, family)


@_check("duality", "decomposition of the dual", needs="connected size3")
def _dual_decomposition(ctx, tally):
    tally.run(duality.verify_dual_decomposition, ctx.M)


def run_suite(M: Matroid, suite: str = "all", fixture: str = "input") -> SuiteReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    names = ("lemmas", "duality") if suite == "all" else (suite,)
    ctx = _Context(M)
    results = [check(ctx) for name in names for _, check in _CHECKS[name]]
    report = SuiteReport(fixture, results)
    logger.info(
        "%s: %d checks, %d instances, %d failures",
        fixture, len(results), sum(r.checked for r in results), len(report.failures),
    )
    return report


def run_corpus(suite: str = "all") -> list[SuiteReport]:
    return [run_suite(M, suite, name) for name, M in corpus()]
