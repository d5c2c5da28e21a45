"""
Order-by-order identity suites with structured pass/fail evidence.

Every check returns a VerifyReport whose witnesses carry the residual of one
identity. A witness passes when its residual is zero, or nonzero for the
negative claims. Engine errors raised while computing a residual are caught
and recorded as failing witnesses.
"""
import concurrent.futures
import itertools
import logging
import math
import time
from collections import defaultdict
from collections.abc import Callable
from collections.abc import Iterable
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Any

from b_expansion import expand_core
from b_expansion import expand_direct_ktilde
from b_expansion import expand_direct_pres
from b_expansion import expand_named
from b_expansion import replace_p_by_k
from coefficients import Coefficient
from coefficients import c_n
from coefficients import c_r_rho
from coefficients import e_n
from coefficients import f_lr
from coefficients import f_lr_closed
from coefficients import f_lr_sum
from coefficients import gamma_ratio_half
from config import CliConfig
from errors import EngineError
from golden import GOLDEN_SERIES
from golden import GoldenTable
from golden import load_default_golden
from golden import table_to_bpoly
from pk_algebra import PkPoly
from pk_algebra import WordPoly
from pk_algebra import format_word
from pk_algebra import identity
from rendering import render_coefficient
from rendering import render_text
from series_builders import HALF
from series_builders import SeriesId
from series_builders import enumerate_S_l_occurrences
from series_builders import junction_mul
from series_builders import native_core
from series_builders import plain_core
from series_builders import series_A
from series_builders import series_k_chain
from series_builders import series_M
from series_builders import series_P_via_tYt
from series_builders import series_Phe_via_projector
from series_builders import series_S_l
from series_builders import series_kres_core_lsum
from series_builders import series_kres_core_rescaled
from series_builders import word_sign
from series_cache import SeriesCache

LEMMA44_MAX_R = 3
COEFFICIENT_RMAX = 10
GAMMA_IDENTITY_RMAX = 6
NEGATIVE_CLAIM_ORDER = 2

Residual = WordPoly | Coefficient | Fraction | int | None


def _is_zero(residual: Residual) -> bool:
    if isinstance(residual, (WordPoly, Coefficient)):
        return residual.is_zero()
    return not residual


@dataclass
class Witness:
    label: str
    residual: Residual
    expect_zero: bool = True
    detail: str = ""
    context: bool = False
    error: bool = False

    @property
    def passed(self) -> bool:
        if self.error:
            return False
        if self.context:
            return True
        return _is_zero(self.residual) == self.expect_zero

    def residual_text(self) -> str | None:
        if self.residual is None:
            return None
        if isinstance(self.residual, WordPoly):
            return render_text(self.residual)
        if isinstance(self.residual, Coefficient):
            return render_coefficient(self.residual)
        return str(self.residual)

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "passed": self.passed,
            "expect_zero": self.expect_zero,
            "context": self.context,
            "residual": self.residual_text(),
            "detail": self.detail,
        }


@dataclass
class VerifyReport:
    suite_name: str
    order: int
    status: str
    witnesses: list[Witness] = field(default_factory=list)
    runtime_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def failures(self) -> list[Witness]:
        return [w for w in self.witnesses if not w.passed]

    def to_dict(self, include_timing: bool = True) -> dict[str, Any]:
        data: dict[str, Any] = {
            "suite": self.suite_name,
            "order": self.order,
            "status": self.status,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }
        if include_timing:
            data["runtime_ms"] = self.runtime_ms
        return data


def _witness(
    label: str,
    compute: Callable[[], Residual],
    expect_zero: bool = True,
    context: bool = False,
    detail: str = "",
) -> Witness:
    try:
        residual = compute()
    except EngineError as e:
        logging.error(f"{label}: {type(e).__name__}: {e}")
        return Witness(label, None, expect_zero, f"{type(e).__name__}: {e}", error=True)
    return Witness(label, residual, expect_zero, detail, context)


def _report(
    suite_name: str,
    order: int,
    witnesses: list[Witness],
    started: float,
) -> VerifyReport:
    status = "pass" if all(w.passed for w in witnesses) else "fail"
    runtime_ms = int((time.perf_counter() - started) * 1000)
    logging.info(f"suite {suite_name} (order {order}): {status} in {runtime_ms} ms")
    return VerifyReport(suite_name, order, status, witnesses, runtime_ms)


class _Series:
    """Memoized access to the cores one check run needs."""

    def __init__(self, cache: SeriesCache | None):
        self.cache = cache if cache is not None else SeriesCache()

    def native(self, series: SeriesId, order: int) -> PkPoly:
        return self.cache.get_or_build(
            ("native", series, order),
            lambda: native_core(series, order)[0],
        )

    def plain(self, series: SeriesId, order: int) -> PkPoly:
        return self.cache.get_or_build(
            ("plain", series, order),
            lambda: plain_core(series, order),
        )


def check_idempotence(order: int, cache: SeriesCache | None = None) -> VerifyReport:
    """P^2 = P, plus the defining equations and commutators it rests on."""
    started = time.perf_counter()
    logging.info(f"suite idempotence: order {order}")
    s = _Series(cache)
    p = identity(order)

    def P() -> PkPoly:
        return s.native(SeriesId.P, order)

    def U() -> PkPoly:
        return s.native(SeriesId.U_aux, order)

    def ktilde() -> PkPoly:
        return s.native(SeriesId.Ktilde, order)

    def ptilde() -> PkPoly:
        return s.native(SeriesId.Ptilde, order)

    def Y() -> PkPoly:
        return s.native(SeriesId.Y, order)

    def ptildeY() -> PkPoly:
        return s.native(SeriesId.PtildeY, order)

    def plain_P_squared() -> PkPoly:
        plain = s.plain(SeriesId.P, order)
        return junction_mul(plain, plain) - plain

    def root_squared() -> PkPoly:
        root = p + series_A(order)
        return root * root - series_M(order)

    def commutator(a: PkPoly, b: PkPoly) -> PkPoly:
        return a * b - b * a

    witnesses = [
        _witness("P P - P (checked wrappers)", lambda: P() * P() - P()),
        _witness("P * P - P (plain wrappers, junction M)", plain_P_squared),
        _witness("p~ p~ - (p + X)", lambda: ptilde() * ptilde() - U()),
        _witness("(p + X) Y - p", lambda: U() * Y() - p),
        _witness("(p + A)^2 - (p + pi^2 pbpbp)", root_squared),
        _witness("p~Y p~Y (p + X) - p", lambda: ptildeY() * ptildeY() * U() - p),
        _witness("p~ Y - p~Y", lambda: ptilde() * Y() - ptildeY()),
        _witness("[k~, p + X]", lambda: commutator(ktilde(), U())),
        _witness("[p~, Y]", lambda: commutator(ptilde(), Y())),
        _witness("[p~, k~]", lambda: commutator(ptilde(), ktilde())),
        _witness("[Y, k~]", lambda: commutator(Y(), ktilde())),
    ]
    return _report("idempotence", order, witnesses, started)


def check_t_not_idempotent(
    order: int = NEGATIVE_CLAIM_ORDER,
    cache: SeriesCache | None = None,
) -> VerifyReport:
    """t~ t~ differs from t~ from second order on (inverted polarity)."""
    started = time.perf_counter()
    s = _Series(cache)

    def t(n: int) -> PkPoly:
        return s.native(SeriesId.Ttilde, n)

    witnesses = [
        _witness(
            "t~ t~ - t~ at order 0 (vacuum)",
            lambda: t(0) * t(0) - t(0),
            context=True,
        ),
        _witness(
            f"t~ t~ - t~ at order {order}",
            lambda: t(order) * t(order) - t(order),
            expect_zero=False,
        ),
        _witness(
            f"t~ Y t~ - t~ t~ at order {order}",
            lambda: t(order) * s.native(SeriesId.Y, order) * t(order)
            - t(order) * t(order),
            expect_zero=False,
        ),
    ]
    return _report("t_not_idempotent", order, witnesses, started)


def check_route_equivalence(
    order: int,
    b_order: int,
    cache: SeriesCache | None = None,
) -> VerifyReport:
    started = time.perf_counter()
    logging.info(f"suite routes: pk order {order}, B order {b_order}")
    s = _Series(cache)

    def closed() -> PkPoly:
        return s.plain(SeriesId.KtildeRes_closed, order)

    def P_from_residuals() -> PkPoly:
        pres = s.plain(SeriesId.PtildeRes, order)
        return s.plain(SeriesId.P, order) - (pres - closed()).scale(HALF)

    def phe_low() -> PkPoly:
        low = min(1, order)
        return s.plain(SeriesId.Phe, order).truncate(low)

    def b_route(series: SeriesId, direct: Callable[[int], WordPoly]) -> WordPoly:
        core = s.plain(series, b_order)
        return direct(b_order) - expand_core(core, b_order)

    def phe_b() -> WordPoly:
        via_projector = series_Phe_via_projector(b_order)
        return expand_core(s.plain(SeriesId.Phe, b_order), b_order) - expand_core(
            via_projector,
            b_order,
        )

    witnesses = [
        _witness(
            "k~res flow - k~res closed",
            lambda: s.plain(SeriesId.KtildeRes_flow, order) - closed(),
        ),
        *(
            _witness(
                f"k~res l-sum - k~res closed at order {2 * r}",
                lambda r=r: series_kres_core_lsum(2 * r) - closed().truncate(2 * r),
            )
            for r in range(order // 2 + 1)
        ),
        _witness(
            "k~res rescaled - k~res closed",
            lambda: series_kres_core_rescaled(order) - closed(),
        ),
        _witness(
            "P (p - p~Y k~)/2 - t~ Y t~",
            lambda: s.native(SeriesId.P, order) - series_P_via_tYt(order),
        ),
        _witness("P - (p~res - k~res)/2", P_from_residuals),
        _witness(
            "P^he (k~ - k~res)/2 - (P - P^res)",
            lambda: s.plain(SeriesId.Phe, order) - series_Phe_via_projector(order),
        ),
        _witness("P^he below second order", phe_low),
        _witness(
            f"k~ direct - k~ core at B order {b_order}",
            lambda: b_route(SeriesId.Ktilde, expand_direct_ktilde),
        ),
        _witness(
            f"p~res direct - N p N core at B order {b_order}",
            lambda: b_route(SeriesId.PtildeRes, expand_direct_pres),
        ),
        _witness(f"P^he routes at B order {b_order}", phe_b),
    ]
    return _report("routes", order, witnesses, started)


def check_415(order: int, cache: SeriesCache | None = None) -> VerifyReport:
    """p~res and k~res compose like p and k (plain wrappers)."""
    started = time.perf_counter()
    s = _Series(cache)

    def kres() -> PkPoly:
        return s.plain(SeriesId.KtildeRes_closed, order)

    def pres() -> PkPoly:
        return s.plain(SeriesId.PtildeRes, order)

    witnesses = [
        _witness("p~res * k~res - k~res", lambda: junction_mul(pres(), kres()) - kres()),
        _witness("k~res * p~res - k~res", lambda: junction_mul(kres(), pres()) - kres()),
        _witness("p~res * p~res - p~res", lambda: junction_mul(pres(), pres()) - pres()),
        _witness("k~res * k~res - p~res", lambda: junction_mul(kres(), kres()) - pres()),
    ]
    return _report("eq415", order, witnesses, started)


def expected_occurrences(r: int, l: int, rho: int) -> int:
    if rho > l:
        return 0
    return math.comb(r + l - rho, l - rho)


def _lemma44_violations(r: int, l: int) -> tuple[int, list[str]]:
    """Compare every word of length 2r+1 against the counting and sign rules."""
    degree = 2 * r
    signs: dict[str, list[int]] = defaultdict(list)
    for word, sign in enumerate_S_l_occurrences(l, degree):
        if len(word) - 1 == degree:
            signs[word].append(sign)
    problems = []
    for letters in itertools.product("pk", repeat=degree + 1):
        word = "".join(letters)
        occurrence_signs = signs.get(word, [])
        p_count = word.count("p")
        pk_word = format_word(word, "b")
        if p_count % 2:
            if occurrence_signs:
                problems.append(f"{pk_word}: odd number of p letters")
            continue
        expected = expected_occurrences(r, l, p_count // 2)
        if len(occurrence_signs) != expected:
            problems.append(
                f"{pk_word}: {len(occurrence_signs)} occurrences, expected {expected}",
            )
        wrong = sum(1 for sign in occurrence_signs if sign != word_sign(word))
        if wrong:
            problems.append(f"{pk_word}: {wrong} occurrences with the wrong sign")
    return len(problems), problems


def check_lemma44(r_max: int = LEMMA44_MAX_R) -> VerifyReport:
    """Brute-force occurrence counts and signs of the words in S(l)."""
    started = time.perf_counter()
    witnesses = []
    for r in range(r_max + 1):
        for l in range(r + 1):
            count, problems = _lemma44_violations(r, l)
            witnesses.append(
                Witness(
                    f"S({l}) at b-degree {2 * r}: counts, signs, parity",
                    count,
                    detail="; ".join(problems[:5]),
                ),
            )
    return _report("lemma44", 2 * r_max, witnesses, started)


def _power_series_defect(coeffs: list[Fraction], target: list[Fraction]) -> Fraction:
    """First nonzero coefficient of (sum coeffs x^n)^2 - target, or 0."""
    for n in range(len(target)):
        square = sum((coeffs[i] * coeffs[n - i] for i in range(n + 1)), Fraction(0))
        if square != target[n]:
            return square - target[n]
    return Fraction(0)


def check_coefficient_identities(rmax: int = COEFFICIENT_RMAX) -> VerifyReport:
    started = time.perf_counter()
    if rmax > 12:
        raise ValueError(f"rmax must be <= 12, got {rmax}")
    witnesses = []

    def forms_disagree() -> int:
        return sum(
            f_lr_sum(l, r) != f_lr_closed(l, r)
            for r in range(rmax + 1)
            for l in range(r + 1)
        )

    witnesses.append(_witness(f"f_lr summation vs closed form, r <= {rmax}", forms_disagree))
    for r in range(rmax + 1):
        witnesses.append(
            _witness(
                f"sum_l f_(l,{r}) - 1",
                lambda r=r: sum((f_lr(l, r) for l in range(r + 1)), Fraction(0)) - 1,
            ),
        )
    for r in range(min(rmax, GAMMA_IDENTITY_RMAX) + 1):
        for rho in range(r + 1):

            def gamma_defect(r=r, rho=rho) -> Fraction:
                total = sum(
                    (
                        f_lr(l, r) * math.comb(r + l - rho, l - rho)
                        for l in range(rho, r + 1)
                    ),
                    Fraction(0),
                )
                return total - gamma_ratio_half(r, rho)

            witnesses.append(
                _witness(f"l-sum gamma ratio (r={r}, rho={rho})", gamma_defect),
            )
            witnesses.append(
                _witness(
                    f"c(r={r}, rho={rho}) grading",
                    lambda r=r, rho=rho: c_r_rho(r, rho)
                    - Coefficient({2 * r: gamma_ratio_half(r, rho)}),
                ),
            )

    def sqrt_defect() -> Fraction:
        coeffs = [Fraction(1)] + [c_n(n) for n in range(1, rmax + 1)]
        target = [Fraction(1), Fraction(1)] + [Fraction(0)] * (rmax - 1)
        return _power_series_defect(coeffs, target[: rmax + 1])

    def inverse_sqrt_defect() -> Fraction:
        coeffs = [e_n(n) for n in range(rmax + 1)]
        # (sum e_n x^n)^2 must equal 1/(1+x)
        target = [Fraction((-1) ** n) for n in range(rmax + 1)]
        return _power_series_defect(coeffs, target)

    witnesses.append(_witness(f"(1 + sum c_n x^n)^2 - (1 + x), degree <= {rmax}", sqrt_defect))
    witnesses.append(
        _witness(f"(sum e_n x^n)^2 (1 + x) - 1, degree <= {rmax}", inverse_sqrt_defect),
    )
    return _report("coefficients", rmax, witnesses, started)


def check_replacement_rule(
    order: int,
    pk_order: int = 6,
    cache: SeriesCache | None = None,
) -> VerifyReport:
    """p -> k maps k~res onto k~; S(l) telescopes onto the k-chain."""
    started = time.perf_counter()
    s = _Series(cache)

    def b_layer() -> WordPoly:
        kres = expand_core(s.plain(SeriesId.KtildeRes_closed, order), order)
        ktilde = expand_core(s.plain(SeriesId.Ktilde, order), order)
        return replace_p_by_k(kres) - ktilde

    witnesses = [_witness(f"p->k of k~res - k~ at B order {order}", b_layer)]
    for l in range(pk_order // 2 + 1):
        witnesses.append(
            _witness(
                f"p->k of S({l}) - k-chain at b order {pk_order}",
                lambda l=l: replace_p_by_k(series_S_l(l, pk_order))
                - series_k_chain(pk_order),
            ),
        )
    return _report("replacement", order, witnesses, started)


def check_golden(
    tables: Iterable[GoldenTable],
    required: Iterable[SeriesId] = GOLDEN_SERIES,
) -> VerifyReport:
    """Exact comparison of the expansions with the golden tables.

    Every series in `required` must have a table; a missing one fails.
    """
    started = time.perf_counter()
    tables = list(tables)
    witnesses: list[Witness] = []
    top = 0
    if not tables:
        witnesses.append(Witness("golden tables", None, detail="no tables", error=True))
    for table in tables:
        top = max(top, table.order)
        label = f"{table.series.value} to B order {table.order}"
        try:
            computed = expand_named(table.series, table.order)
        except EngineError as e:
            witnesses.append(
                Witness(label, None, detail=f"{type(e).__name__}: {e}", error=True),
            )
            continue
        expected = table_to_bpoly(table)
        difference = computed - expected
        if difference.is_zero():
            witnesses.append(Witness(label, difference))
            continue
        for word, coeff in difference.items():
            for exponent in coeff.pi_exponents():
                got = computed.coefficient(word).terms.get(exponent, Fraction(0))
                want = expected.coefficient(word).terms.get(exponent, Fraction(0))
                witnesses.append(
                    Witness(
                        f"{table.series.value} {format_word(word, 'B')} pi^{exponent}",
                        got - want,
                        detail=f"computed {got}, golden {want}",
                    ),
                )
    present = {table.series for table in tables}
    for series in required:
        if series not in present:
            witnesses.append(
                Witness(f"{series.value} table", None, detail="missing table", error=True),
            )
    return _report("golden", top, witnesses, started)


@dataclass
class RunContext:
    order_pk: int
    order_b: int
    golden_path: str
    cache: SeriesCache
    golden_tables: list[GoldenTable] | None = None

    def tables(self) -> list[GoldenTable]:
        if self.golden_tables is None:
            self.golden_tables = load_default_golden(self.golden_path)
        return self.golden_tables


def _run_golden(ctx: RunContext) -> VerifyReport:
    return check_golden(ctx.tables())


SUITES: dict[str, Callable[[RunContext], VerifyReport]] = {
    "idempotence": lambda ctx: check_idempotence(ctx.order_pk, ctx.cache),
    "t_not_idempotent": lambda ctx: check_t_not_idempotent(
        NEGATIVE_CLAIM_ORDER,
        ctx.cache,
    ),
    "routes": lambda ctx: check_route_equivalence(ctx.order_pk, ctx.order_b, ctx.cache),
    "eq415": lambda ctx: check_415(ctx.order_pk, ctx.cache),
    "lemma44": lambda ctx: check_lemma44(min(LEMMA44_MAX_R, ctx.order_pk // 2)),
    "coefficients": lambda ctx: check_coefficient_identities(COEFFICIENT_RMAX),
    "replacement": lambda ctx: check_replacement_rule(
        ctx.order_b,
        ctx.order_pk,
        ctx.cache,
    ),
    "golden": _run_golden,
}


def resolve_suites(names: Iterable[str]) -> list[str]:
    """Expand 'all' and reject unknown names; keeps catalog order."""
    selected = set()
    for name in names:
        if name == "all":
            selected.update(SUITES)
        elif name in SUITES:
            selected.add(name)
        else:
            raise EngineError(
                f"unknown suite {name!r}; known: all, {', '.join(SUITES)}",
            )
    return [name for name in SUITES if name in selected]


def run_suites(
    names: Iterable[str],
    config: CliConfig,
    cache: SeriesCache | None = None,
    order_pk: int | None = None,
    order_b: int | None = None,
    golden_tables: list[GoldenTable] | None = None,
) -> list[VerifyReport]:
    """Run the selected suites concurrently; reports come back in catalog order."""
    selected = resolve_suites(names)
    ctx = RunContext(
        order_pk=config.default_order_pk if order_pk is None else order_pk,
        order_b=config.route_order_b if order_b is None else order_b,
        golden_path=config.golden_path,
        cache=cache if cache is not None else SeriesCache(),
        golden_tables=golden_tables,
    )
    if "golden" in selected:
        ctx.tables()
    results: dict[int, VerifyReport] = {}
    max_workers = max(1, min(len(selected), config.max_workers))
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {
            executor.submit(SUITES[name], ctx): i for i, name in enumerate(selected)
        }
        for future in concurrent.futures.as_completed(futures):
            i = futures[future]
            try:
                results[i] = future.result()
            except EngineError as e:
                logging.error(f"Suite {selected[i]} failed: {e}")
                results[i] = VerifyReport(
                    selected[i],
                    ctx.order_pk,
                    "fail",
                    [Witness(selected[i], None, detail=str(e), error=True)],
                )
    return [results[i] for i in sorted(results)]
