"""Prompt sentiment providers: map free text to per-family danger likelihoods.

Two provider kinds share one interface: a deterministic lexicon scorer (the
test substrate and offline default) and a remote completion client that asks a
language model for a JSON family-to-likelihood map.
"""

from __future__ import annotations

import json
import math
import os
import re
import statistics
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

import requests

from .bayes import EPSILON, CoefficientStore, clamp_probability

ENV_URL = "PROMPTNAV_LLM_URL"
ENV_KEY = "PROMPTNAV_LLM_KEY"
ENV_TIMEOUT = "PROMPTNAV_LLM_TIMEOUT_S"

KIND_LEXICON = "lexicon"
KIND_REMOTE = "remote"

DANGER_TOKENS = frozenset(
    {
        "dangerous",
        "danger",
        "hazard",
        "hazardous",
        "unsafe",
        "careful",
        "caution",
        "risky",
        "busy",
        "crowded",
        "cluttered",
    }
)
SAFE_TOKENS = frozenset({"safe", "safely", "empty", "clear", "quickly", "fine", "calm"})
INTENSIFIERS = frozenset({"incredibly", "very", "extremely"})
LEXICON_WEIGHT = 0.5

# Versioned prompt templates for the remote provider. Placeholders:
# {families}, {posteriors}, {prompt}.
TEMPLATES = {
    "danger-map-v1": (
        "You assess danger levels on a construction site. Object families: "
        "{families}. Current danger estimates (0 = safest, 1 = most dangerous): "
        "{posteriors}. Read the operator message below and reply with ONLY a "
        "JSON object mapping every family name to a danger likelihood between "
        "0 and 1.\nOperator message: {prompt}"
    ),
    "priors-v1": (
        "You assess danger levels on a construction site. Reply with ONLY a "
        "JSON object mapping every one of these object families to an initial "
        "danger coefficient between 0 and 1: {families}."
    ),
}

_BACKOFF_INITIAL_S = 0.5


class ProviderError(RuntimeError):
    """Provider failed to produce a usable likelihood assignment."""

    def __init__(self, message: str, raw_reply: str | None = None):
        super().__init__(message)
        self.raw_reply = raw_reply


class TransportError(ProviderError):
    """Remote endpoint unreachable, timed out, or returned a bad status."""


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = KIND_LEXICON
    endpoint: str | None = None
    # Name of the environment variable holding the bearer token.
    auth_token_env: str = ENV_KEY
    timeout_s: float = 30.0
    retries: int = 2
    template_id: str = "danger-map-v1"
    danger_tokens: frozenset[str] = DANGER_TOKENS
    safe_tokens: frozenset[str] = SAFE_TOKENS
    intensifiers: frozenset[str] = INTENSIFIERS

    def __post_init__(self) -> None:
        if self.kind not in (KIND_LEXICON, KIND_REMOTE):
            raise ProviderError(f"unknown provider kind '{self.kind}'")
        if self.kind == KIND_REMOTE and not self.endpoint:
            raise ProviderError("remote provider requires an endpoint")
        if not self.timeout_s > 0:
            raise ProviderError("timeout must be positive")

    @classmethod
    def from_env(cls, kind: str = KIND_REMOTE) -> "ProviderConfig":
        return cls(
            kind=kind,
            endpoint=os.environ.get(ENV_URL),
            timeout_s=float(os.environ.get(ENV_TIMEOUT, "30")),
        )


@dataclass(frozen=True)
class LikelihoodAssignment:
    likelihoods: Mapping[str, float]
    provider: str
    raw_reply: str


@dataclass(frozen=True)
class StabilityReport:
    prompt: str
    trials: int
    stats: Mapping[str, tuple[float, float]]  # family -> (mean, population std)

    def format_table(self) -> str:
        width = max([len(f) for f in self.stats] + [len("Family")])
        lines = [f"{'Family':<{width}}  Danger (mean ± std, n={self.trials})"]
        for name, (mean, std) in self.stats.items():
            lines.append(f"{name:<{width}}  {mean:.2f} ± {std:.2f}")
        return "\n".join(lines)


def tokenize(text: str) -> list[str]:
    return re.findall(r"[a-z0-9']+", text.lower())


def lexicon_score(
    prompt: str,
    danger_tokens: frozenset[str] = DANGER_TOKENS,
    safe_tokens: frozenset[str] = SAFE_TOKENS,
    intensifiers: frozenset[str] = INTENSIFIERS,
    weight: float = LEXICON_WEIGHT,
) -> float:
    """Deterministic polarity score in [0, 1]; 0.5 when no sentiment tokens.

    Each danger/safe token counts 1.0, doubled when the preceding word is an
    intensifier; the balance passes through a tanh squash.
    """
    tokens = tokenize(prompt)
    danger_hits = 0.0
    safe_hits = 0.0
    for idx, token in enumerate(tokens):
        boost = 2.0 if idx > 0 and tokens[idx - 1] in intensifiers else 1.0
        if token in danger_tokens:
            danger_hits += boost
        elif token in safe_tokens:
            safe_hits += boost
    return 0.5 + 0.5 * math.tanh(weight * (danger_hits - safe_hits))


def mentions_family(prompt: str, family: str) -> bool:
    """Case-insensitive whole-word match of the (possibly multi-word) family name."""
    family_tokens = tokenize(family)
    if not family_tokens:
        return False
    tokens = tokenize(prompt)
    n = len(family_tokens)
    return any(tokens[k : k + n] == family_tokens for k in range(len(tokens) - n + 1))


def analyze(
    prompt: str,
    families: Sequence[str],
    store: CoefficientStore,
    cfg: ProviderConfig,
) -> LikelihoodAssignment:
    """Produce per-family likelihoods for a prompt. Never mutates the store.

    Lexicon: the polarity score applies to families named in the prompt, or to
    every family when none is named; unnamed families stay neutral at 0.5.
    Remote: one completion call with the current posteriors in the template.
    """
    if not families:
        raise ProviderError("analyze requires at least one family")
    if cfg.kind == KIND_LEXICON:
        score = clamp_probability(
            lexicon_score(prompt, cfg.danger_tokens, cfg.safe_tokens, cfg.intensifiers)
        )
        mentioned = [f for f in families if mentions_family(prompt, f)]
        targets = set(mentioned) if mentioned else set(families)
        likelihoods = {f: (score if f in targets else 0.5) for f in families}
        return LikelihoodAssignment(
            likelihoods=likelihoods,
            provider=KIND_LEXICON,
            raw_reply=json.dumps(likelihoods, sort_keys=True),
        )
    text = render_template(cfg.template_id, families, store, prompt)
    reply = complete(cfg, text)
    return parse_remote_reply(reply, families)


def render_template(
    template_id: str,
    families: Sequence[str],
    store: CoefficientStore,
    prompt: str,
) -> str:
    if template_id not in TEMPLATES:
        raise ProviderError(f"unknown prompt template '{template_id}'")
    posteriors = {f: round(store.posteriors.get(f, 0.5), 6) for f in families}
    return TEMPLATES[template_id].format(
        families=json.dumps(list(families)),
        posteriors=json.dumps(posteriors, sort_keys=True),
        prompt=prompt,
    )


def complete(cfg: ProviderConfig, text: str) -> str:
    """Single text-in/text-out completion call with retries and a shared deadline."""
    if cfg.kind != KIND_REMOTE or not cfg.endpoint:
        raise ProviderError("complete() requires a remote provider config")
    headers = {"Content-Type": "application/json"}
    token = os.environ.get(cfg.auth_token_env, "")
    if token:
        headers["Authorization"] = f"Bearer {token}"
    deadline = time.monotonic() + cfg.timeout_s
    backoff = _BACKOFF_INITIAL_S
    last_error: Exception | None = None
    for attempt in range(cfg.retries + 1):
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            break
        try:
            resp = requests.post(
                cfg.endpoint,
                json={"prompt": text},
                headers=headers,
                timeout=remaining,
            )
            if resp.status_code >= 500:
                raise TransportError(
                    f"endpoint returned {resp.status_code}", raw_reply=resp.text
                )
            if resp.status_code >= 400:
                raise ProviderError(
                    f"endpoint rejected the request with {resp.status_code}",
                    raw_reply=resp.text,
                )
            return resp.text
        except (requests.ConnectionError, requests.Timeout, TransportError) as exc:
            last_error = exc
            if attempt < cfg.retries:
                time.sleep(min(backoff, max(deadline - time.monotonic(), 0)))
                backoff *= 2
    raise TransportError(f"remote provider unreachable: {last_error}")


def parse_remote_reply(reply: str, families: Sequence[str]) -> LikelihoodAssignment:
    """Extract the first JSON object from the reply and clamp its values.

    Errors when no JSON object parses, a requested family is missing, or a
    value is not numeric; the raw reply rides along on the exception.
    """
    obj = _first_json_object(reply)
    if obj is None:
        raise ProviderError("reply contains no JSON object", raw_reply=reply)
    likelihoods = {}
    for family in families:
        if family not in obj:
            raise ProviderError(f"reply is missing family '{family}'", raw_reply=reply)
        value = obj[family]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ProviderError(
                f"reply value for '{family}' is not numeric: {value!r}", raw_reply=reply
            )
        likelihoods[family] = min(max(float(value), EPSILON), 1.0 - EPSILON)
    return LikelihoodAssignment(likelihoods=likelihoods, provider=KIND_REMOTE, raw_reply=reply)


def initial_priors(families: Sequence[str], cfg: ProviderConfig) -> dict[str, float]:
    """Provider-derived starting coefficients for a family list.

    The lexicon scores each family name on its own (neutral 0.5 unless the
    name itself carries sentiment); the remote provider is asked once for the
    whole map.
    """
    if cfg.kind == KIND_LEXICON:
        return {
            f: clamp_probability(
                lexicon_score(f, cfg.danger_tokens, cfg.safe_tokens, cfg.intensifiers)
            )
            for f in families
        }
    text = TEMPLATES["priors-v1"].format(families=json.dumps(list(families)))
    reply = complete(cfg, text)
    return dict(parse_remote_reply(reply, families).likelihoods)


def stability_report(
    cfg: ProviderConfig,
    prompt: str,
    families: Sequence[str],
    store: CoefficientStore,
    trials: int,
) -> StabilityReport:
    """Run analyze ``trials`` times and summarize per-family mean and spread."""
    if trials < 1:
        raise ProviderError("stability report needs at least one trial")
    samples: dict[str, list[float]] = {f: [] for f in families}
    for iteration in range(trials):
        try:
            assignment = analyze(prompt, families, store, cfg)
        except ProviderError as exc:
            raise ProviderError(f"iteration {iteration}: {exc}", raw_reply=exc.raw_reply) from exc
        for f in families:
            samples[f].append(assignment.likelihoods[f])
    stats = {
        f: (statistics.fmean(vals), statistics.pstdev(vals)) for f, vals in samples.items()
    }
    return StabilityReport(prompt=prompt, trials=trials, stats=stats)


def _first_json_object(text: str) -> dict | None:
    decoder = json.JSONDecoder()
    for match in re.finditer(r"\{", text):
        try:
            obj, _ = decoder.raw_decode(text, match.start())
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj
    return None
