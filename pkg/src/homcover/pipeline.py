"""Search for a solvable cover on which an automorphism acts with infinite order.

The search climbs a tower of mod-p covers of the rose.  At every level it
tests the exact homology action of the lifted map; the shadow / extremal /
nilpotent machinery only steers which prime to take next.  Certificates are
re-derived from scratch by :func:`verify_certificate` before they are
returned, so their soundness never rests on the heuristics.
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import Config
from .extremal import ExtremalSubgraph, extremal_subgraph, orbit_count
from .graphs import (BudgetError, Cover, compose_covers, deck_is_abelian, homology_action,
                     homology_basis, lift_map, lift_through_tower, mod_p_cover, rose, rose_map,
                     trivial_cover)
from .group_ring import find_large_character, l1_norm, l2_norm_sq
from .nilpotent import LevelVerdict, enfeoffment_level
from .shadow import group_like_power, shadow_phi
from .spectra import integer_order, integer_spectral_radius
from .transition import build_transition, lift_subgraph, matrix
from .words import FreeAut, abelianization_matrix, check_automorphism, format_aut, parse_aut, power

log = logging.getLogger(__name__)


def content_hash(body: dict) -> str:
    blob = json.dumps({k: v for k, v in body.items() if k != "hash"}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class Certificate:
    data: dict

    @property
    def power(self):
        return self.data["power"]

    @property
    def tower(self):
        return self.data["tower"]

    @property
    def matrix(self):
        return self.data["matrix"]

    @property
    def verdict(self):
        return self.data["verdict"]

    @property
    def total_edges(self):
        return self.data["diagnostics"]["total_edges"]

    def to_json(self) -> dict:
        return self.data


@dataclass
class Exhausted:
    report: dict = field(default_factory=dict)


@dataclass
class VerifyResult:
    ok: bool
    problems: list

    def __bool__(self):
        return self.ok


def _vertex_level(T, sub: ExtremalSubgraph | frozenset, zero: bool, config: Config) -> LevelVerdict:
    if zero:
        return LevelVerdict(1, 0)
    edges = sub.edges if isinstance(sub, ExtremalSubgraph) else sub
    if not edges:
        return LevelVerdict(None)
    try:
        return enfeoffment_level(T, edges, config.class_max, config.k_max, method="matrix")
    except BudgetError:
        return LevelVerdict(None)


def _lvl(v: LevelVerdict) -> float:
    return float("inf") if v.level is None else v.level


def _stage_record(cover: Cover, stage_base_rank: int) -> dict:
    st = dict(cover.stages[-1])
    st["stage_rank"] = stage_base_rank
    st["lift_basepoint"] = cover.total.basepoint
    return st


def trace_criteria(T0, cover: Cover, n: int, config: Config) -> dict:
    """Diagnostics comparing the trace of a lift against the two sufficiency tests."""
    t = matrix(T0).trace()
    m = cover.total.num_edges
    out = {"l1": l1_norm(t), "l2_sq": l2_norm_sq(t), "edges": m,
           "l2_criterion": l2_norm_sq(t) > m}
    try:
        out["orbits"] = orbit_count(t, cover)
    except ValueError:
        out["orbits"] = None
    out["orbits_needed"] = n + 1
    out["orbit_criterion"] = out["orbits"] is not None and out["orbits"] >= n + 1
    psi = find_large_character(t, m, config.char_denominators) if t.terms and T0.rank <= 3 else None
    out["character"] = None if psi is None else [str(x) for x in psi.q]
    return out


def _emit(f: FreeAut, stages, pw: int, M, verdict, config: Config, diagnostics: dict) -> Certificate:
    body = {
        "automorphism": format_aut(f),
        "rank": f.rank,
        "tower": stages,
        "power": pw,
        "matrix": [[int(x) for x in row] for row in np.asarray(M, dtype=object)],
        "verdict": verdict.to_json(),
        "budgets": config.to_json(),
        "toolversion": __version__,
        "diagnostics": diagnostics,
    }
    body["hash"] = content_hash(body)
    cert = Certificate(body)
    res = verify_certificate(cert)
    if not res.ok:  # pragma: no cover - soundness guard
        raise AssertionError(f"refusing to emit an unverifiable certificate: {res.problems}")
    return cert


def run_search(f: FreeAut, config: Config | None = None):
    """Certificate of infinite-order homological action, or :class:`Exhausted`."""
    config = config or Config()
    if not check_automorphism(f):
        raise ValueError("input is not an automorphism")
    n = f.rank
    sigma = abelianization_matrix(f)
    ov = integer_order(sigma)
    diagnostics = {"base_radius": ov.radius}
    if ov.infinite:
        diagnostics["total_edges"] = n
        return _emit(f, [], 1, sigma, ov, config, diagnostics)

    pw = ov.order
    phi = rose_map(power(f, pw))
    T = build_transition(phi)
    diagnostics["strongly_connected"] = T.is_strongly_connected()
    try:
        k0 = group_like_power(T, cap=config.cycle_cap)
    except BudgetError:
        k0 = 1
        diagnostics["group_like_power"] = "budget"
    if k0 > 1:
        pw *= k0
        phi = rose_map(power(f, pw))
        T = build_transition(phi)
    diagnostics["power_replacement"] = k0
    report = shadow_phi(T, cap=config.cycle_cap)
    diagnostics["shadow_dim"] = report.polytope.affine_dim
    diagnostics["shadow_full_dimensional"] = report.polytope.affine_dim == n
    subs = [extremal_subgraph(T, v, w) for v, w in zip(report.vertices, report.omega)]
    zero = [s.is_zero_vertex for s in subs]
    levels = [_vertex_level(T, s.edges, z, config) for s, z in zip(subs, zero)]
    progress = [{"vertex": [str(a) for a in s.vertex], "levels": [_lvl_json(lv)]} for s, lv in zip(subs, levels)]

    cover = trivial_cover(rose(n))
    phi0, T0, cur_subs = phi, T, [s.edges for s in subs]
    stages, budgets_hit, covers_seen = [], [], []
    best_radius = ov.radius or 1.0
    for depth in range(config.max_stages + 1):
        H = homology_action(phi0, homology_basis(cover.total))
        hv = integer_order(H)
        best_radius = max(best_radius, hv.radius or integer_spectral_radius(H))
        entry = {"depth": depth, "edges": cover.total.num_edges, "order": hv.to_json()["tag"],
                 "levels": [_lvl_json(lv) for lv in levels]}
        entry.update(trace_criteria(T0, cover, n, config) if T0.rank <= 200 else {})
        covers_seen.append(entry)
        log.info("depth %d: %d edges, action %s", depth, cover.total.num_edges, hv.tag)
        if hv.infinite:
            diagnostics.update({"total_edges": cover.total.num_edges, "covers": covers_seen,
                                "vertices": progress})
            return _emit(f, stages, pw, H, hv, config, diagnostics)
        if depth == config.max_stages:
            break
        descending = any(_lvl(lv) > 1 for lv in levels)
        chosen = None
        for p in config.primes:
            try:
                nxt = mod_p_cover(cover.total, p, config.edge_cap)
            except BudgetError as exc:
                budgets_hit.append({"depth": depth, "p": p, "reason": str(exc)})
                continue
            lifted = lift_map(nxt, phi0)
            if lifted is None:
                continue
            T1 = build_transition(lifted)
            new_subs = [lift_subgraph(T1, T0, nxt, s) for s in cur_subs]
            new_levels = [_vertex_level(T1, s, z, config) for s, z in zip(new_subs, zero)]
            if descending and max(map(_lvl, new_levels)) >= max(map(_lvl, levels)):
                continue
            chosen = (p, nxt, lifted, T1, new_subs, new_levels)
            break
        if chosen is None:
            break
        p, nxt, phi0, T0, cur_subs, levels = chosen
        stages.append(_stage_record(nxt, cover.total.euler_rank))
        cover = nxt if not cover.stages else compose_covers(nxt, cover)
        for pr, lv in zip(progress, levels):
            pr["levels"].append(_lvl_json(lv))
    note = None
    if _is_identity_aut(f):
        note = "identity automorphism: acts trivially on every cover"
    return Exhausted({
        "automorphism": format_aut(f),
        "power": pw,
        "vertices": progress,
        "covers": covers_seen,
        "budgets_hit": budgets_hit,
        "best_radius": best_radius,
        "diagnostics": diagnostics,
        "note": note,
        "budgets": config.to_json(),
    })


def _is_identity_aut(f: FreeAut) -> bool:
    return all(img == (i + 1,) for i, img in enumerate(f.images))


def _lvl_json(lv: LevelVerdict):
    return "exceeded" if lv.level is None else lv.level


def verify_certificate(cert) -> VerifyResult:
    """Rebuild the tower, re-lift the stated power and recompute the verdict."""
    data = cert.data if isinstance(cert, Certificate) else cert
    problems = []
    if "hash" in data and data["hash"] != content_hash(data):
        problems.append("content hash mismatch")
    try:
        f = parse_aut(data["automorphism"])
    except Exception as exc:  # noqa: BLE001 - any parse failure invalidates
        return VerifyResult(False, [f"bad automorphism: {exc}"])
    if not check_automorphism(f):
        problems.append("input is not an automorphism")
    pw = int(data["power"])
    cap = int(data.get("budgets", {}).get("edge_cap", Config().edge_cap))
    try:
        levels, lifted = lift_through_tower(rose_map(power(f, pw)), data["tower"], cap)
    except (BudgetError, ValueError, KeyError) as exc:
        return VerifyResult(False, problems + [f"tower rebuild failed: {exc}"])
    if lifted is None:
        return VerifyResult(False, problems + [f"stage {len(levels)} does not lift"])
    for i, cov in enumerate(levels):
        if not cov.is_regular() or not deck_is_abelian(cov):
            problems.append(f"stage {i} is not a regular abelian cover")
    H = homology_action(lifted, homology_basis(lifted.domain))
    stated = np.array(data["matrix"], dtype=object)
    if stated.shape != H.shape or not (stated == H).all():
        problems.append("homology matrix differs from the recomputed action")
    verdict = integer_order(H)
    if not verdict.infinite:
        problems.append(f"recomputed action has finite order {verdict.order}")
    elif data["verdict"].get("tag") != "infinite":
        problems.append("stated verdict is not 'infinite'")
    return VerifyResult(not problems, problems)


def report_trace_budget(f: FreeAut, cover: Cover | None = None, i: int = 1,
                        config: Config | None = None) -> dict:
    """Trace norms, edge count and orbit count of the lift of ``f^i``."""
    config = config or Config()
    cover = trivial_cover(rose(f.rank)) if cover is None else cover
    base = rose_map(power(f, i))
    phi0 = base if not cover.stages else lift_map(cover, base)
    if phi0 is None:
        raise ValueError("f^i does not lift to this cover")
    T0 = build_transition(phi0)
    out = trace_criteria(T0, cover, f.rank, config)
    H = homology_action(phi0, homology_basis(cover.total))
    out["acts_trivially"] = bool((H == np.eye(H.shape[0], dtype=object)).all())
    out["order"] = integer_order(H).tag
    out["power"] = i
    if (out["l2_criterion"] or out["orbit_criterion"]) and out["order"] == "finite":
        out["flag"] = "criterion met but the action is finite: hypotheses of the sufficiency tests fail"
    return out
