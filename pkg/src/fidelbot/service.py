"""HTTP service: direct chat endpoint plus a Messenger-compatible webhook.

Shared mutable state is the ContextStore alone. Dialogue turns run in worker
threads while holding the user's lock, so same-user turns serialize and
different users proceed in parallel.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, replace
from pathlib import Path

import anyio
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .dialogue import ConversationContext, DialogueConfig, DialogueEngine
from .intents import catalog_stats

log = logging.getLogger("fidelbot.service")

_ENV_PREFIX = "FIDELBOT_"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    verify_token: str = "fidelbot-verify"
    artifact_path: str | None = None
    catalog_path: str | None = None
    rules_dir: str | None = None
    snapshot_path: str | None = None
    ui_dir: str | None = None
    confidence_threshold: float = 0.25
    seed: int = 42

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(doc) - {f.name for f in cls.__dataclass_fields__.values()}
        if unknown:
            raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
        return cls(**doc)

    def with_env_overrides(self) -> "ServiceConfig":
        """FIDELBOT_HOST, FIDELBOT_PORT, FIDELBOT_VERIFY_TOKEN and the path
        fields override file values; useful for containerized deploys."""
        fields = {
            "HOST": "host",
            "PORT": "port",
            "VERIFY_TOKEN": "verify_token",
            "ARTIFACT": "artifact_path",
            "CATALOG": "catalog_path",
            "RULES_DIR": "rules_dir",
            "SNAPSHOT": "snapshot_path",
            "UI_DIR": "ui_dir",
        }
        updates = {}
        for env_key, field_name in fields.items():
            value = os.environ.get(_ENV_PREFIX + env_key)
            if value is not None:
                updates[field_name] = int(value) if field_name == "port" else value
        return replace(self, **updates) if updates else self

    def dialogue_config(self) -> DialogueConfig:
        return DialogueConfig(confidence_threshold=self.confidence_threshold, seed=self.seed)


class ContextStore:
    """user_id -> ConversationContext with per-user mutual exclusion.

    hold(user_id) gives the lock a caller must own for the whole
    read-respond-write span of a turn. An optional snapshot file is rewritten
    after every put, so a restart recovers each user's active context.
    """

    def __init__(self, snapshot_path: str | Path | None = None):
        self._contexts: dict[str, ConversationContext] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._meta = threading.Lock()
        self._snapshot_write = threading.Lock()
        self.snapshot_path = Path(snapshot_path) if snapshot_path else None
        if self.snapshot_path and self.snapshot_path.exists():
            self._load_snapshot()

    def hold(self, user_id: str) -> threading.Lock:
        with self._meta:
            if user_id not in self._locks:
                self._locks[user_id] = threading.Lock()
            return self._locks[user_id]

    def get(self, user_id: str) -> ConversationContext:
        with self._meta:
            ctx = self._contexts.get(user_id)
        return ctx if ctx is not None else ConversationContext(user_id=user_id)

    def put(self, ctx: ConversationContext):
        with self._meta:
            self._contexts[ctx.user_id] = ctx
        if self.snapshot_path:
            self.save_snapshot()

    def __len__(self) -> int:
        with self._meta:
            return len(self._contexts)

    def save_snapshot(self):
        if not self.snapshot_path:
            return
        with self._meta:
            doc = {
                uid: {
                    "active_context": c.active_context,
                    "updated_at": c.updated_at,
                    "turn_count": c.turn_count,
                }
                for uid, c in self._contexts.items()
            }
        with self._snapshot_write:
            tmp = self.snapshot_path.with_suffix(".tmp")
            tmp.write_text(json.dumps(doc, ensure_ascii=False, indent=2), encoding="utf-8")
            tmp.replace(self.snapshot_path)

    def _load_snapshot(self):
        try:
            doc = json.loads(self.snapshot_path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, OSError) as exc:
            log.warning("ignoring unreadable snapshot %s: %s", self.snapshot_path, exc)
            return
        for uid, entry in doc.items():
            self._contexts[uid] = ConversationContext(
                user_id=uid,
                active_context=entry.get("active_context"),
                updated_at=float(entry.get("updated_at", 0.0)),
                turn_count=int(entry.get("turn_count", 0)),
            )


def build_engine(config: ServiceConfig) -> DialogueEngine:
    """Load rules, catalog and artifact named by the config and wire them
    into a dialogue engine, fingerprint-checked."""
    from .artifact import load_artifact
    from .intents import load_catalog
    from .textproc import default_config, load_config

    if not config.artifact_path or not config.catalog_path:
        raise ValueError("artifact_path and catalog_path are required")
    pconfig = load_config(config.rules_dir) if config.rules_dir else default_config()
    catalog = load_catalog(config.catalog_path)
    artifact = load_artifact(config.artifact_path, expected_config=pconfig)
    return DialogueEngine(artifact, catalog, pconfig, config.dialogue_config())


class LogSink:
    """Default outbound-reply sink: log and forget. A platform send-API
    client can replace it without touching the endpoints."""

    def send(self, user_id: str, text: str):
        log.info("reply to %s: %s", user_id, text)


def create_app(
    config: ServiceConfig,
    engine: DialogueEngine | None,
    store: ContextStore | None = None,
    sink=None,
) -> FastAPI:
    if not config.verify_token:
        raise ValueError("verify_token must be nonempty")
    store = store if store is not None else ContextStore(config.snapshot_path)
    sink = sink if sink is not None else LogSink()

    @asynccontextmanager
    async def lifespan(_app):
        yield
        store.save_snapshot()

    app = FastAPI(title="fidelbot", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.store = store
    app.state.engine = engine
    started = time.monotonic()

    def run_turn(user_id: str, text: str):
        with store.hold(user_id):
            ctx = store.get(user_id)
            reply, new_ctx = engine.turn(ctx, text)
            store.put(new_ctx)
        return reply

    @app.get("/webhook")
    async def verify(request: Request):
        params = request.query_params
        mode = params.get("hub.mode")
        token = params.get("hub.verify_token")
        challenge = params.get("hub.challenge")
        if mode is None or token is None or challenge is None:
            return PlainTextResponse("missing hub.* parameters", status_code=400)
        if mode == "subscribe" and token == config.verify_token:
            return PlainTextResponse(challenge)
        return PlainTextResponse("verification failed", status_code=403)

    @app.post("/webhook")
    async def receive(request: Request):
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return PlainTextResponse("body is not valid JSON", status_code=400)
        if not isinstance(body, dict) or body.get("object") != "page":
            return PlainTextResponse("unknown event object", status_code=404)
        if engine is None:
            return PlainTextResponse("no model loaded", status_code=503)
        replies = []
        for entry in body.get("entry", []):
            for item in entry.get("messaging", []):
                sender = item.get("sender", {}).get("id")
                if not sender:
                    continue
                text = item.get("message", {}).get("text")
                # non-text events still get a turn; empty input means fallback
                reply = await anyio.to_thread.run_sync(
                    run_turn, sender, text if isinstance(text, str) else ""
                )
                sink.send(sender, reply.text)
                replies.append({"recipient": sender, "text": reply.text})
        return JSONResponse({"status": "EVENT_RECEIVED", "replies": replies})

    @app.post("/chat")
    async def chat(request: Request):
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return JSONResponse({"error": "body is not valid JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be an object"}, status_code=400)
        user_id = body.get("user_id")
        message = body.get("message")
        if not isinstance(user_id, str) or not user_id or not isinstance(message, str):
            return JSONResponse(
                {"error": "need string fields user_id and message"}, status_code=400
            )
        if engine is None:
            return JSONResponse({"error": "no model loaded"}, status_code=503)
        reply = await anyio.to_thread.run_sync(run_turn, user_id, message)
        return JSONResponse(
            {
                "reply": reply.text,
                "intent": reply.intent_tag,
                "confidence": reply.confidence,
                "context": reply.context_after,
                "fallback": reply.fallback,
            }
        )

    @app.get("/health")
    async def health():
        doc = {
            "status": "ok" if engine is not None else "no-model",
            "uptime_seconds": time.monotonic() - started,
            "active_users": len(store),
        }
        if engine is not None:
            stats = catalog_stats(engine.catalog)
            doc["model_kind"] = engine.artifact.kind
            doc["preprocess_fingerprint"] = engine.artifact.preprocess_fingerprint
            doc["catalog"] = {
                "tags": stats.tag_count,
                "patterns": stats.pattern_count,
                "responses": stats.response_count,
            }
        return JSONResponse(doc)

    if config.ui_dir and Path(config.ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
