"""Per-family danger coefficients with sequential Bayesian consolidation.

The hypothesis H per family is "this family's surroundings are hazardous";
prompt evidence arrives as likelihoods P(E|H) and the complement model
P(E|not-H) = 1 - P(E|H) keeps the posterior normalized with 0.5 as the
neutral fixed point.

Posteriors are always recomputed from the prior plus the full evidence log in
log-odds space using ``math.fsum``. The exactly rounded sum makes the result
independent of evidence order, keeps neutral evidence an exact no-op, and
makes replaying the log reproduce stored posteriors bit for bit; a naive
left-to-right fold guarantees none of these under floating point.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .field import DEFAULT_D_MAX_M, MODE_SCALE_DMAX, MODE_SCALE_KREP, FieldParams
from .scene import OccupancyGrid

# Probability clamp: keeps a single extreme prompt from producing an
# absorbing 0/1 posterior.
EPSILON = 1e-6

# Posterior 1.0 maps to the top of the heatmap scale.
DEFAULT_K_GLOBAL = 5.0


class StoreError(ValueError):
    """Invalid coefficient store input or inconsistent import."""


def clamp_probability(value: float) -> float:
    if not math.isfinite(value):
        raise StoreError(f"probability must be finite, got {value!r}")
    return min(max(value, EPSILON), 1.0 - EPSILON)


@dataclass(frozen=True)
class EvidenceRecord:
    prompt_text: str
    likelihoods: Mapping[str, float]
    provider: str
    timestamp: float


@dataclass(frozen=True)
class CoefficientStore:
    families: tuple[str, ...]
    priors: Mapping[str, float]
    posteriors: Mapping[str, float]
    evidence_log: tuple[EvidenceRecord, ...] = field(default_factory=tuple)


def init_priors(families: Iterable[str], assignments: Mapping[str, float]) -> CoefficientStore:
    """Fresh store: clamped priors, empty log, posterior == prior."""
    names = tuple(families)
    priors: dict[str, float] = {}
    for name in names:
        if name not in assignments:
            raise StoreError(f"missing prior for family '{name}'")
        priors[name] = clamp_probability(float(assignments[name]))
    return CoefficientStore(families=names, priors=priors, posteriors=dict(priors))


def update(
    store: CoefficientStore,
    likelihoods: Mapping[str, float],
    prompt_text: str = "",
    provider: str = "",
    timestamp: float | None = None,
) -> CoefficientStore:
    """Consolidate one piece of evidence; returns a new store."""
    clamped = _clamp_map(store, likelihoods)
    record = EvidenceRecord(
        prompt_text=prompt_text,
        likelihoods=clamped,
        provider=provider,
        timestamp=time.time() if timestamp is None else timestamp,
    )
    log = store.evidence_log + (record,)
    return replace(store, posteriors=_posteriors_from_log(store, log), evidence_log=log)


def update_sequence(
    store: CoefficientStore, chain: Iterable[Mapping[str, float]]
) -> CoefficientStore:
    """Fold a chain of likelihood maps into the store; order does not matter."""
    out = store
    for likelihoods in chain:
        out = update(out, likelihoods)
    return out


def replay(store: CoefficientStore) -> Mapping[str, float]:
    """Recompute posteriors from the priors and evidence log."""
    return _posteriors_from_log(store, store.evidence_log)


def posterior_after_evidence(prior: float, likelihoods: Iterable[float]) -> float:
    """Posterior of one hypothesis after a chain of independent likelihoods."""
    prior = clamp_probability(prior)
    terms = [_log_odds(clamp_probability(l)) for l in likelihoods]
    shift = math.fsum(terms)
    if shift == 0.0:
        return prior
    return clamp_probability(_sigmoid(_log_odds(prior) + shift))


def to_field_params(
    store: CoefficientStore,
    grid: OccupancyGrid,
    k_global: float = DEFAULT_K_GLOBAL,
    d_max: float = DEFAULT_D_MAX_M,
    mode: str = MODE_SCALE_KREP,
) -> FieldParams:
    """Turn posteriors into repulsion parameters for every obstacle in the grid.

    scale_krep: strength = posterior * k_global, shared cutoff.
    scale_dmax: shared strength k_global, cutoff = posterior * d_max.
    """
    k_rep: dict[str, float] = {}
    cutoffs: dict[str, float] = {}
    for obs_id, family in grid.families.items():
        if family not in store.posteriors:
            raise StoreError(f"no danger coefficient for family '{family}'")
        posterior = store.posteriors[family]
        if mode == MODE_SCALE_KREP:
            k_rep[obs_id] = posterior * k_global
        elif mode == MODE_SCALE_DMAX:
            k_rep[obs_id] = k_global
            cutoffs[obs_id] = posterior * d_max
        else:
            raise StoreError(f"unknown field mode '{mode}'")
    return FieldParams(
        k_rep_per_obstacle=k_rep,
        d_max=d_max,
        mode=mode,
        d_max_per_obstacle=cutoffs if mode == MODE_SCALE_DMAX else None,
    )


def store_to_dict(store: CoefficientStore) -> dict:
    families = {}
    evidence = [
        {
            "prompt": rec.prompt_text,
            "likelihoods": {name: rec.likelihoods[name] for name in store.families},
            "provider": rec.provider,
        }
        for rec in store.evidence_log
    ]
    for name in store.families:
        families[name] = {
            "prior": store.priors[name],
            "posterior": store.posteriors[name],
            "evidence": evidence,
        }
    return {"families": families}


def store_from_dict(data: dict) -> CoefficientStore:
    """Rebuild a store from its export; posteriors are replayed and verified."""
    raw = data.get("families")
    if not isinstance(raw, dict):
        raise StoreError("store document needs a 'families' object")
    names = tuple(raw)
    priors = {}
    stored_posteriors = {}
    for name in names:
        entry = raw[name]
        if not isinstance(entry, dict) or "prior" not in entry:
            raise StoreError(f"family '{name}' entry needs a 'prior'")
        priors[name] = float(entry["prior"])
        stored_posteriors[name] = float(entry.get("posterior", entry["prior"]))
    store = init_priors(names, priors)

    first = raw[names[0]] if names else {}
    records = first.get("evidence", []) if isinstance(first, dict) else []
    for idx, rec in enumerate(records):
        if not isinstance(rec, dict) or not isinstance(rec.get("likelihoods"), dict):
            raise StoreError(f"evidence[{idx}] needs a 'likelihoods' map")
        store = update(
            store,
            {k: float(v) for k, v in rec["likelihoods"].items()},
            prompt_text=str(rec.get("prompt", "")),
            provider=str(rec.get("provider", "")),
            timestamp=0.0,
        )
    for name in names:
        if not math.isclose(store.posteriors[name], stored_posteriors[name], abs_tol=1e-12):
            raise StoreError(
                f"stored posterior for '{name}' ({stored_posteriors[name]}) does not "
                f"match replay of the evidence log ({store.posteriors[name]})"
            )
    return store


def _clamp_map(store: CoefficientStore, likelihoods: Mapping[str, float]) -> dict[str, float]:
    clamped = {}
    for name in store.families:
        if name not in likelihoods:
            raise StoreError(f"missing likelihood for family '{name}'")
        clamped[name] = clamp_probability(float(likelihoods[name]))
    return clamped


def _posteriors_from_log(
    store: CoefficientStore, log: tuple[EvidenceRecord, ...]
) -> dict[str, float]:
    return {
        name: posterior_after_evidence(
            store.priors[name], (rec.likelihoods[name] for rec in log)
        )
        for name in store.families
    }


def _log_odds(p: float) -> float:
    # For a likelihood this is the log evidence ratio P(E|H) / P(E|not-H)
    # under the complement model; for a prior it is the prior log odds.
    return math.log(p) - math.log1p(-p)


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)
