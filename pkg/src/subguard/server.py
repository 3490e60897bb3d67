"""Minimal HTTP search endpoint over a RepoStore.

GET /search?query=<movie filename>&imdb=<id>&top=<n> returns the
ranked entries as JSON. Single purpose, stdlib http.server; not a
general web service.
"""

from __future__ import annotations

import json
import logging
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .errors import EmptyCorpus, EmptyMovieTags
from .ranking import Query, RepoStore

logger = logging.getLogger(__name__)

DEFAULT_TOP = 10


class SearchHandler(BaseHTTPRequestHandler):
    server_version = "subguard-search/0.1"

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, indent=2).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        url = urlparse(self.path)
        if url.path != "/search":
            self._send_json(404, {"error": "unknown path; use /search"})
            return
        params = parse_qs(url.query)
        queries = params.get("query", [])
        if not queries or not queries[0]:
            self._send_json(400, {"error": "missing 'query' parameter"})
            return
        imdb = params.get("imdb", [""])[0]
        try:
            top = int(params.get("top", [str(DEFAULT_TOP)])[0])
        except ValueError:
            self._send_json(400, {"error": "'top' must be an integer"})
            return
        if top < 1:
            self._send_json(400, {"error": "'top' must be positive"})
            return
        store: RepoStore = self.server.store  # type: ignore[attr-defined]
        try:
            ranked = store.search(Query(queries[0], imdb), top=top)
        except EmptyMovieTags as exc:
            self._send_json(400, {"error": str(exc)})
            return
        except EmptyCorpus as exc:
            self._send_json(503, {"error": str(exc)})
            return
        self._send_json(
            200,
            {
                "query": queries[0],
                "imdb": imdb,
                "results": [
                    {
                        "filename": s.entry.filename,
                        "imdb": s.entry.imdb_id,
                        "rank": s.entry.rank.value,
                        "score": s.rendered,
                    }
                    for s in ranked
                ],
            },
        )

    def log_message(self, format: str, *args) -> None:  # noqa: A002
        logger.debug("%s - %s", self.address_string(), format % args)


def make_server(
    store: RepoStore, host: str = "127.0.0.1", port: int = 0
) -> ThreadingHTTPServer:
    """Build (but do not start) the search server; port 0 picks a free
    port, readable from server.server_address afterwards."""
    server = ThreadingHTTPServer((host, port), SearchHandler)
    server.store = store  # type: ignore[attr-defined]
    return server


def serve_forever(
    store: RepoStore, host: str = "127.0.0.1", port: int = 8657
) -> None:
    server = make_server(store, host, port)
    actual_host, actual_port = server.server_address[:2]
    print(f"search endpoint on http://{actual_host}:{actual_port}/search")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
