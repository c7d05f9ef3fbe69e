"""Websocket transport for the session service.

Each connection gets its own isolated session; messages within a
connection are handled strictly in arrival order (one reader loop per
connection, no shared state between sessions).
"""

from __future__ import annotations

import asyncio
import itertools
import json
import logging

from websockets.asyncio.server import serve

from .service import ServiceConfig, Session, message_to_json

log = logging.getLogger(__name__)

_session_counter = itertools.count(1)


async def _handle_connection(ws, config: ServiceConfig) -> None:
    session = Session(f"s{next(_session_counter):04d}", config)
    log.info("session %s connected", session.id)
    try:
        async for raw in ws:
            try:
                msg = json.loads(raw)
            except json.JSONDecodeError as exc:
                await ws.send(message_to_json(
                    {"type": "error", "code": "bad_json", "message": str(exc)}
                ))
                continue
            for out in session.handle_message(msg):
                await ws.send(message_to_json(out))
    finally:
        path = session.write_log()
        if path is not None:
            log.info("session %s log written to %s", session.id, path)
        log.info("session %s closed", session.id)


async def run_server(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8765,
                     ready: asyncio.Event | None = None) -> None:
    async def handler(ws):
        await _handle_connection(ws, config)

    async with serve(handler, host, port) as server:
        log.info("serving on ws://%s:%d", host, port)
        if ready is not None:
            ready.set()
        await server.serve_forever()


def serve_forever(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8765) -> None:
    try:
        asyncio.run(run_server(config, host, port))
    except KeyboardInterrupt:
        pass
