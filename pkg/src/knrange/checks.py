"""Executable checks of the standalone facts behind the preserver
classification, usable as regression tests and as CLI-invokable demos.

The centerpiece is the counterexample pair (A, B) built from the weighted
shift X = [[0,3,0],[0,0,1],[0,0,0]]: when both factors are at least 3x3,
W_k(A x B) differs from W_k(A x B^t) for every k, which rules the partial
transposes out as preservers for min(m, n) >= 3. The Hermitian parts have
closed-form spectra

    Herm(A x B):    {+-sqrt(41/2), +-3/2, +-3/2, 0 x (mn-6)}
    Herm(A x B^t):  {+-9/2, +-sqrt(9/2), +-1/2, 0 x (mn-6)}

(both tensor products are unitarily similar to a direct sum of the zero block
with two 2x2 and one 3x3 nilpotent blocks, which accounts for the mn-6 zeros).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import classify
from .matcore import (
    BipartiteShape,
    as_matrix,
    hermiticity_defect,
    hermitian_part,
    is_hermitian,
    is_orthogonal_pair,
    kron,
    max_abs,
    random_haar_unitary,
    random_hermitian,
)
from .maps import CanonicalFormSpec, VARPHI_TAGS, affine_reflect, build_canonical
from .ranges import (
    boundary_point,
    krange_hermitian,
    krange_profile,
    sample_points,
    support_values,
)

GAP_THRESHOLD = 1e-6
SPECTRUM_TOL = 1e-10


def counterexample_matrices(m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """The pair (A, B): weighted shift X zero-padded to m x m and n x n."""
    if m < 3 or n < 3:
        raise ValueError(f"counterexample needs m, n >= 3, got ({m}, {n})")
    x = np.array([[0, 3, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
    a = np.zeros((m, m), dtype=complex)
    b = np.zeros((n, n), dtype=complex)
    a[:3, :3] = x
    b[:3, :3] = x
    return a, b


@dataclass(frozen=True)
class CounterexampleReport:
    m: int
    n: int
    spectrum_ab: np.ndarray
    spectrum_abt: np.ndarray
    expected_ab: np.ndarray
    expected_abt: np.ndarray
    gap_per_k: dict[int, float]
    passed: bool


def _expected_spectra(mn: int) -> tuple[np.ndarray, np.ndarray]:
    zeros = [0.0] * (mn - 6)
    ab = sorted([np.sqrt(41 / 2), 1.5, 1.5, -1.5, -1.5, -np.sqrt(41 / 2)] + zeros)
    abt = sorted([4.5, np.sqrt(4.5), 0.5, -0.5, -np.sqrt(4.5), -4.5] + zeros)
    return np.array(ab), np.array(abt)


def check_counterexample(
    m: int,
    n: int,
    tol: float = SPECTRUM_TOL,
    gap_threshold: float = GAP_THRESHOLD,
) -> CounterexampleReport:
    """Spectra of the Hermitian parts against their closed forms, plus the
    W_k interval gap |hi - hi'| + |lo - lo'| for every k in 1..mn-1."""
    a, b = counterexample_matrices(m, n)
    ab = kron(a, b)
    abt = kron(a, b.T)
    spec_ab = np.linalg.eigvalsh(hermitian_part(ab))
    spec_abt = np.linalg.eigvalsh(hermitian_part(abt))
    expected_ab, expected_abt = _expected_spectra(m * n)
    spectra_ok = (
        max_abs(spec_ab - expected_ab) <= tol and max_abs(spec_abt - expected_abt) <= tol
    )
    gap_per_k: dict[int, float] = {}
    for k in range(1, m * n):
        i1 = krange_hermitian(hermitian_part(ab), k)
        i2 = krange_hermitian(hermitian_part(abt), k)
        gap_per_k[k] = abs(i1.hi - i2.hi) + abs(i1.lo - i2.lo)
    passed = spectra_ok and all(g > gap_threshold for g in gap_per_k.values())
    return CounterexampleReport(
        m=m,
        n=n,
        spectrum_ab=spec_ab,
        spectrum_abt=spec_abt,
        expected_ab=expected_ab,
        expected_abt=expected_abt,
        gap_per_k=gap_per_k,
        passed=passed,
    )


@dataclass(frozen=True)
class ImplicationCheck:
    """Result of a hypothesis => conclusion instance check.

    A failed hypothesis makes the instance vacuous: ok is then true but the
    vacuous flag keeps it from counting as evidence.
    """

    hypothesis_holds: bool
    conclusion_holds: bool | None

    @property
    def vacuous(self) -> bool:
        return not self.hypothesis_holds

    @property
    def ok(self) -> bool:
        return self.vacuous or bool(self.conclusion_holds)


def check_block_split(h, k: int, tol: float = 1e-8) -> ImplicationCheck:
    """If the first k diagonal entries of a Hermitian matrix sum to the sum of
    its k largest eigenvalues, the matrix splits as A_1 (+) A_2 with A_1 of
    size k carrying exactly those eigenvalues."""
    m = as_matrix(h)
    if not is_hermitian(m):
        raise ValueError(
            f"check_block_split needs a Hermitian matrix (defect {hermiticity_defect(m):.3e})"
        )
    if not 1 <= k <= m.shape[0]:
        raise ValueError(f"k must be in 1..dim, got {k}")
    scale = 1.0 + max_abs(m)
    w = np.sort(np.linalg.eigvalsh(m))[::-1]
    diag_sum = float(np.real(np.trace(m[:k, :k])))
    if abs(diag_sum - float(w[:k].sum())) > tol * scale:
        return ImplicationCheck(hypothesis_holds=False, conclusion_holds=None)
    off_block = max_abs(m[:k, k:]) if k < m.shape[0] else 0.0
    lead_spec = np.sort(np.linalg.eigvalsh(m[:k, :k]))[::-1]
    conclusion = off_block <= tol * scale and max_abs(lead_spec - w[:k]) <= tol * scale
    return ImplicationCheck(hypothesis_holds=True, conclusion_holds=conclusion)


def check_orthogonality_criterion(a, b, k: int, tol: float = 1e-8) -> ImplicationCheck:
    """For PSD A, B: if tr(A)/k equals the top of W_k(A - B), then A and B are
    orthogonal (AB* = A*B = 0)."""
    ma, mb = as_matrix(a), as_matrix(b)
    for name, mat in (("A", ma), ("B", mb)):
        if not is_hermitian(mat):
            raise ValueError(f"{name} must be Hermitian PSD")
        if float(np.linalg.eigvalsh(mat)[0]) < -tol:
            raise ValueError(f"{name} must be positive semidefinite")
    hi = krange_hermitian(ma - mb, k).hi
    if abs(float(np.trace(ma).real) / k - hi) > tol:
        return ImplicationCheck(hypothesis_holds=False, conclusion_holds=None)
    return ImplicationCheck(
        hypothesis_holds=True, conclusion_holds=is_orthogonal_pair(ma, mb, tol)
    )


# ---------------------------------------------------------------------------
# The full suite: sufficiency, necessity witnesses, range properties,
# complement identity, counterexample. Deterministic given the seed.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteItem:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


def _valid_forms(shape: BipartiteShape) -> list[tuple[str, bool]]:
    tags = [t for t in VARPHI_TAGS if t in ("id", "t") or min(shape.m, shape.n) <= 2]
    forms = [(t, False) for t in tags]
    if shape.is_half:
        forms += [(t, True) for t in tags]
    return forms


def _invalid_forms(shape: BipartiteShape) -> list[tuple[str, bool]]:
    if min(shape.m, shape.n) <= 2:
        return []
    forms = [("pt_right", False), ("pt_left", False)]
    if shape.is_half:
        forms += [("pt_right", True), ("pt_left", True)]
    return forms


def _range_property_items(shape: BipartiteShape, rng: np.random.Generator) -> list[SuiteItem]:
    """Spot checks of the structural properties of W_k on random matrices."""
    d = shape.dim
    k = shape.k
    worst = {
        "sample_containment": 0.0,
        "endpoint_attainment": 0.0,
        "affine_covariance": 0.0,
        "unitary_invariance": 0.0,
        "compression": 0.0,
        "detection_errors": 0.0,
    }
    detection_ok = True
    for _ in range(20):
        h = random_hermitian(d, rng)
        interval = krange_hermitian(h, k)
        pts = sample_points(h, k, 200, rng)
        worst["sample_containment"] = max(
            worst["sample_containment"],
            float(np.max(pts.real - interval.hi)),
            float(np.max(interval.lo - pts.real)),
            float(np.max(np.abs(pts.imag))),
        )
        worst["endpoint_attainment"] = max(
            worst["endpoint_attainment"],
            abs(boundary_point(h, k, 0.0).real - interval.hi),
            abs(boundary_point(h, k, np.pi).real - interval.lo),
        )
        alpha, beta = float(rng.normal()), float(rng.normal())
        shifted = krange_hermitian(alpha * np.eye(d) + beta * h, k)
        lo, hi = sorted((alpha + beta * interval.lo, alpha + beta * interval.hi))
        worst["affine_covariance"] = max(
            worst["affine_covariance"], abs(shifted.lo - lo), abs(shifted.hi - hi)
        )
        c = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        u = random_haar_unitary(d, rng)
        p1 = krange_profile(c, k, 90)
        p2 = krange_profile(u @ c @ u.conj().T, k, 90)
        scale = 1.0 + max(max_abs(p1.support), max_abs(p2.support))
        worst["unitary_invariance"] = max(
            worst["unitary_invariance"], float(np.max(np.abs(p1.support - p2.support))) / scale
        )
        s = int(rng.integers(k + 1, d + 1))  # public W_k API needs k < dim
        v = random_haar_unitary(d, rng)[:s, :]
        hs = support_values(v @ c @ v.conj().T, k, p1.angles)
        worst["compression"] = max(worst["compression"], float(np.max(hs - p1.support)))
        herm_profile = krange_profile(h, k, 90)
        if float(np.max(np.abs(herm_profile.boundary.imag))) > 1e-9 * (1 + max_abs(h)):
            detection_ok = False
        if float(np.max(np.abs(p1.boundary.imag))) <= 1e-9 * (1 + max_abs(c)):
            detection_ok = False  # a Ginibre draw is never Hermitian
    passed = (
        worst["sample_containment"] <= 1e-9
        and worst["endpoint_attainment"] <= 1e-9
        and worst["affine_covariance"] <= 1e-10
        and worst["unitary_invariance"] <= 1e-8
        and worst["compression"] <= 1e-9
        and detection_ok
    )
    detail = {key: float(val) for key, val in worst.items()}
    detail["detection_ok"] = detection_ok
    return [SuiteItem(name="properties:range", passed=passed, detail=detail)]


def _complement_item(shape: BipartiteShape, rng: np.random.Generator) -> SuiteItem:
    """(d-k) W_{d-k}(A) = tr(A) - k W_k(A) for Hermitian A, as intervals."""
    d = shape.dim
    worst = 0.0
    for _ in range(20):
        h = random_hermitian(d, rng)
        tr = float(np.trace(h).real)
        for k in range(1, d):
            left = krange_hermitian(h, d - k)
            right = krange_hermitian(h, k)
            worst = max(
                worst,
                abs((d - k) * left.hi - (tr - k * right.lo)),
                abs((d - k) * left.lo - (tr - k * right.hi)),
            )
    return SuiteItem(
        name="properties:complement", passed=worst <= 1e-10, detail={"worst": worst}
    )


def preserver_suite(
    shape: BipartiteShape,
    seed=0,
    trials: int = 20,
    num_angles: int = 360,
    tol: float = 1e-8,
) -> list[SuiteItem]:
    """Run the whole battery for one shape; deterministic given the seed."""
    rng = np.random.default_rng(seed)
    items: list[SuiteItem] = []

    for tag, affine in _valid_forms(shape):
        u = random_haar_unitary(shape.dim, rng)
        phi = build_canonical(CanonicalFormSpec(varphi=tag, unitary=u, affine=affine, shape=shape))
        report = classify.verify_preserver(
            phi, trials=trials, num_angles=num_angles, tol=tol, seed=rng.integers(2**63)
        )
        items.append(
            SuiteItem(
                name=f"sufficiency:{tag}" + ("+affine" if affine else ""),
                passed=report.passed,
                detail={"max_defect": report.max_support_defect},
            )
        )

    for tag, affine in _invalid_forms(shape):
        u = random_haar_unitary(shape.dim, rng)
        phi = build_canonical(CanonicalFormSpec(varphi=tag, unitary=u, affine=affine, shape=shape))
        report = classify.verify_preserver(
            phi, trials=trials, num_angles=num_angles, tol=tol, seed=rng.integers(2**63)
        )
        items.append(
            SuiteItem(
                name=f"necessity:{tag}" + ("+affine" if affine else ""),
                passed=not report.passed,
                detail={"max_defect": report.max_support_defect},
            )
        )

    if not shape.is_half:
        # Affine forms must be rejected at construction, and the bare
        # reflection genuinely moves W_k: it sends I to (mn/k - 1) I.
        try:
            build_canonical(
                CanonicalFormSpec(
                    varphi="id",
                    unitary=np.eye(shape.dim, dtype=complex),
                    affine=True,
                    shape=shape,
                )
            )
            rejected = False
        except ValueError:
            rejected = True
        reflected = krange_hermitian(affine_reflect(np.eye(shape.dim), shape.k), shape.k)
        moved = abs(reflected.hi - 1.0) > GAP_THRESHOLD
        items.append(
            SuiteItem(
                name="necessity:affine-rejected",
                passed=rejected and moved,
                detail={"reflected_hi": reflected.hi},
            )
        )

    items.extend(_range_property_items(shape, rng))
    items.append(_complement_item(shape, rng))

    if shape.m >= 3 and shape.n >= 3:
        report = check_counterexample(shape.m, shape.n)
        items.append(
            SuiteItem(
                name="counterexample",
                passed=report.passed,
                detail={"min_gap": min(report.gap_per_k.values())},
            )
        )
    return items


def suite_passed(items: list[SuiteItem]) -> bool:
    return all(item.passed for item in items)


def suite_to_payload(items: list[SuiteItem]) -> list[dict]:
    return [
        {"item": item.name, "pass": item.passed, "detail": item.detail} for item in items
    ]


def suite_json(items: list[SuiteItem]) -> str:
    return json.dumps(suite_to_payload(items), indent=2, sort_keys=True)
