"""One conversational turn: classify, filter by context, answer.

The flow is eligibility first, argmax second. Intents carrying a
context_filter only compete while that context is active; the winner is the
highest-probability intent among the eligible ones, and only then is the
confidence threshold applied. Fallback replies leave the active context
untouched.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .artifact import ArtifactMismatchError, ModelArtifact
from .features import LabelMap, VectorMode, Vocabulary, vectorize
from .intents import Intent, IntentCatalog
from .textproc import PreprocessConfig, preprocess

DEFAULT_FALLBACK = "ይቅርታ፣ ጥያቄዎን በደንብ አልገባኝም። እባክዎ በሌላ መንገድ ይጠይቁ።"


@dataclass(frozen=True)
class ConversationContext:
    user_id: str
    active_context: str | None = None
    updated_at: float = 0.0
    turn_count: int = 0


@dataclass(frozen=True)
class BotReply:
    text: str
    intent_tag: str | None
    confidence: float
    context_after: str | None
    fallback: bool


@dataclass(frozen=True)
class DialogueConfig:
    confidence_threshold: float = 0.25
    fallback_responses: tuple[str, ...] = (DEFAULT_FALLBACK,)
    seed: int = 42

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold < 1.0:
            raise ValueError("confidence_threshold must be in [0, 1)")
        if not self.fallback_responses:
            raise ValueError("need at least one fallback response")


def eligible_intents(catalog: IntentCatalog, ctx: ConversationContext) -> list[Intent]:
    out = []
    for intent in catalog.intents:
        f = intent.context_filter
        if f is None or f == "" or f == ctx.active_context:
            out.append(intent)
    return out


def pick_response(intent: Intent, rng: random.Random) -> str:
    return rng.choice(intent.responses)


def _fallback(ctx, config, rng, confidence: float):
    reply = BotReply(
        text=rng.choice(list(config.fallback_responses)),
        intent_tag=None,
        confidence=confidence,
        context_after=ctx.active_context,
        fallback=True,
    )
    new_ctx = replace(ctx, updated_at=time.time(), turn_count=ctx.turn_count + 1)
    return reply, new_ctx


def respond(
    ctx: ConversationContext,
    user_text: str,
    model,
    vocab: Vocabulary,
    labels: LabelMap,
    catalog: IntentCatalog,
    config: DialogueConfig,
    preprocess_config: PreprocessConfig,
    rng: random.Random,
    expected_fingerprint: str | None = None,
    vector_mode: VectorMode = "binary",
) -> tuple[BotReply, ConversationContext]:
    """Run one turn and return the reply plus the evolved context.

    Total over arbitrary input. Fallback happens in exactly three cases: the
    input vectorizes to all zeros, no intent is eligible, or the best eligible
    intent sits below the confidence threshold.
    """
    if expected_fingerprint is not None and expected_fingerprint != preprocess_config.fingerprint:
        raise ArtifactMismatchError(
            "model fingerprint does not match the active preprocessing rules"
        )

    stems = preprocess(user_text, preprocess_config)
    v = vectorize(stems, vocab, vector_mode)
    if not np.any(v):
        return _fallback(ctx, config, rng, 0.0)

    candidates = eligible_intents(catalog, ctx)
    if not candidates:
        return _fallback(ctx, config, rng, 0.0)

    probs = model.predict_proba(v)
    best_intent, best_prob = None, -1.0
    for intent in sorted(candidates, key=lambda i: labels.class_of[i.tag]):
        p = float(probs[labels.class_of[intent.tag]])
        if p > best_prob:
            best_intent, best_prob = intent, p
    if best_prob < config.confidence_threshold:
        return _fallback(ctx, config, rng, best_prob)

    text = pick_response(best_intent, rng)
    if best_intent.context_set is None:
        new_active = ctx.active_context
    elif best_intent.context_set == "":
        new_active = None
    else:
        new_active = best_intent.context_set
    reply = BotReply(
        text=text,
        intent_tag=best_intent.tag,
        confidence=best_prob,
        context_after=new_active,
        fallback=False,
    )
    new_ctx = replace(
        ctx,
        active_context=new_active,
        updated_at=time.time(),
        turn_count=ctx.turn_count + 1,
    )
    return reply, new_ctx


@dataclass
class DialogueEngine:
    """Binds a loaded artifact to a catalog and rules for repeated turns.

    Reply randomness is derived per turn from (seed, user_id, turn_count), so
    any surface replaying the same conversation script gets the same replies.
    """

    artifact: ModelArtifact
    catalog: IntentCatalog
    preprocess_config: PreprocessConfig
    config: DialogueConfig = field(default_factory=DialogueConfig)

    def __post_init__(self):
        if self.artifact.preprocess_fingerprint != self.preprocess_config.fingerprint:
            raise ArtifactMismatchError(
                "artifact was trained under different preprocessing rules"
            )
        catalog_tags = {i.tag for i in self.catalog.intents}
        if not catalog_tags.issubset(set(self.artifact.labels.tags)):
            raise ArtifactMismatchError(
                "catalog contains tags the model was not trained on"
            )

    def turn_rng(self, ctx: ConversationContext) -> random.Random:
        return random.Random(f"{self.config.seed}:{ctx.user_id}:{ctx.turn_count}")

    def turn(self, ctx: ConversationContext, user_text: str):
        return respond(
            ctx,
            user_text,
            self.artifact.model,
            self.artifact.vocabulary,
            self.artifact.labels,
            self.catalog,
            self.config,
            self.preprocess_config,
            self.turn_rng(ctx),
            vector_mode=self.artifact.vector_mode,
        )
