"""Case orchestration and result rendering.

run_case ties the pipeline together for one case: structural identities,
power structure, certificate, relation witness and word sampling.  The
JSON rendering is deterministic (sorted keys, exact rationals as strings)
so that two runs with the same inputs produce byte-identical output apart
from the per-case "ms" timing field.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional

from . import __version__
from .catalog import (
    CaseSpec,
    NoStructureError,
    StructureReport,
    build_generators,
    builtin_catalog,
    detect_power_structure,
    render_expected,
    verify_structure,
)
from .certify import Verdict, verify_case
from .cones import build_cones
from .linalg import Mat, rat_str
from .words import (
    WordEvaluator,
    oracle_nontriviality,
    sample_reduced_words,
    spec_for_splitting,
    verify_relation,
)


@dataclass(frozen=True)
class CaseRecord:
    case: CaseSpec
    structure: Optional[StructureReport]
    verdict: Optional[Verdict]
    relation_value: Optional[str]
    sample_count: int
    sampling_violations: Optional[tuple]
    ms: int
    error: Optional[str] = None

    @property
    def matches_expected(self) -> bool:
        """Does the computed outcome agree with the catalog expectation?

        split: verdict pass with the same descriptor.  relation: verdict
        fail with the witness evaluating to I or -I.  unknown: anything.
        Structural checks must pass and sampling must stay clean always.
        """
        if self.error is not None or self.verdict is None:
            return False
        if self.structure is None or not self.structure.all_passed:
            return False
        if self.sampling_violations:
            return False
        case = self.case
        if case.expected_kind == "split":
            return (
                self.verdict.kind == "pass"
                and self.verdict.splitting == case.expected_splitting
            )
        if case.expected_kind == "relation":
            return self.verdict.kind == "fail" and self.relation_value in ("I", "-I")
        return True


@dataclass(frozen=True)
class RunReport:
    catalog_name: str
    records: tuple

    @property
    def all_match(self) -> bool:
        return all(r.matches_expected for r in self.records)


def run_case(
    case: CaseSpec,
    p_max: int = 12,
    sample_count: int = 1000,
    max_syllables: int = 20,
    seed: int = 1,
) -> CaseRecord:
    """Full pipeline for one case.

    Word sampling runs only for pass verdicts: the sampled reduced words
    are nontrivial in the certified splitting, so any of them evaluating
    to +-I would contradict the certificate.
    """
    start = time.perf_counter()
    structure = None
    verdict = None
    relation_value = None
    violations = None
    error = None
    try:
        structure = verify_structure(case, p_max)
        verdict = verify_case(case, p_max)
        if case.relation_word is not None:
            relation_value = verify_relation(case.relation_word, build_generators(case))
        if verdict.kind == "pass" and sample_count > 0:
            gens = build_generators(case)
            spec = spec_for_splitting(verdict.splitting)
            words = sample_reduced_words(spec, sample_count, max_syllables, seed)
            violations = oracle_nontriviality(words, gens, WordEvaluator(gens))
    except NoStructureError as err:
        error = str(err)
    ms = int(round((time.perf_counter() - start) * 1000))
    return CaseRecord(
        case=case,
        structure=structure,
        verdict=verdict,
        relation_value=relation_value,
        sample_count=sample_count if violations is not None else 0,
        sampling_violations=violations,
        ms=ms,
        error=error,
    )


def run_catalog(
    cases: Optional[Iterable[CaseSpec]] = None,
    catalog_name: str = "builtin",
    **kwargs,
) -> RunReport:
    if cases is None:
        cases = builtin_catalog()
    return RunReport(catalog_name, tuple(run_case(case, **kwargs) for case in cases))


def _vec_json(vec) -> list:
    return [rat_str(x) for x in vec]


def _mat_json(mat: Mat) -> list:
    return [[rat_str(x) for x in row] for row in mat.rows]


def _structure_json(record: CaseRecord) -> Optional[dict]:
    structure = record.structure
    if structure is None:
        return None
    power = structure.power
    return {
        "charpoly": repr(structure.charpoly),
        "order": power.finite_order if power else None,
        "period": power.period if power else None,
        "sigma": power.sigma if power else None,
        "nilpotency": power.nilpotency_degree if power else None,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in structure.checks
        ],
    }


def _certificate_json(case: CaseSpec, verdict: Verdict) -> dict:
    cert = verdict.certificate
    cones = build_cones(build_generators(case))
    return {
        "H": cert.h_kind,
        "G1": cert.g1,
        "G2": cert.g2,
        "residues": [[j, branch] for j, branch in cert.residues],
        "assumptions": list(cert.assumptions),
        "cones": {
            "v": _vec_json(cones.v),
            "M": _mat_json(cones.M),
            "N": _mat_json(cones.N),
        },
        "checks": [
            {
                "condition": c.condition,
                "target": c.target,
                "j": c.j,
                "branch": c.branch,
                "kind": c.kind,
                "sigma": c.sigma,
                "verdict": c.verdict,
                "threshold": c.threshold,
                "checked": [[n, pattern] for n, pattern in c.checked],
                "passed": c.passed,
                "note": c.note,
            }
            for c in cert.checks
        ],
    }


def _case_json(record: CaseRecord) -> dict:
    case = record.case
    verdict = record.verdict
    out = {
        "id": case.id,
        "dim": case.dim,
        "params": [rat_str(p) for p in case.params] if case.params else None,
        "d": case.d,
        "k": case.k,
        "expected": render_expected(case),
        "structure": _structure_json(record),
        "verdict": verdict.kind if verdict else None,
        "splitting": verdict.splitting.render() if verdict and verdict.splitting else None,
        "relation": (
            {"word": case.relation_word, "value": record.relation_value}
            if case.relation_word
            else None
        ),
        "sampling": (
            {
                "count": record.sample_count,
                "violations": list(record.sampling_violations or ()),
            }
            if record.sampling_violations is not None
            else None
        ),
        "certificate": _certificate_json(case, verdict) if verdict else None,
        "failing": (
            {"condition": verdict.failing.condition, "target": verdict.failing.target}
            if verdict and verdict.failing
            else None
        ),
        "ms": record.ms,
        "matches_expected": record.matches_expected,
        "error": record.error,
    }
    return out


def report_json(report: RunReport) -> str:
    payload = {
        "version": __version__,
        "catalog": report.catalog_name,
        "status": "ok" if report.all_match else "mismatch",
        "cases": [_case_json(r) for r in report.records],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _verdict_cell(record: CaseRecord) -> str:
    if record.error is not None:
        return f"error ({record.error})"
    verdict = record.verdict
    if verdict.kind == "pass":
        return f"pass  {verdict.splitting.render()}"
    if verdict.kind == "fail":
        return f"fail  {record.case.relation_word} = {record.relation_value}"
    fail = verdict.failing
    return f"inconclusive  first failure {fail.condition} at {fail.target}"


def report_text(report: RunReport) -> str:
    lines = []
    width = max(len(r.case.id) for r in report.records)
    for record in report.records:
        mark = "ok " if record.matches_expected else "MISMATCH"
        lines.append(
            f"{record.case.id:<{width}}  expected {render_expected(record.case):<24}"
            f" -> {_verdict_cell(record)}  [{mark}]"
        )
        if record.sampling_violations:
            lines.append(f"  sampling violations: {list(record.sampling_violations)}")
    good = sum(1 for r in report.records if r.matches_expected)
    lines.append(f"{good}/{len(report.records)} cases match expectations")
    return "\n".join(lines) + "\n"
