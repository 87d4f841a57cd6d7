"""Drive the HTTP JSON service end to end: health, translation with a
session, pictogram bytes, and inline accuracy evaluation.

Run:  python demos/07_http_service.py
"""
import json
import threading
import urllib.request

from pictopipe import Engine
from pictopipe.resources import data_path
from pictopipe.service import create_server

engine = Engine()
server = create_server(engine, "127.0.0.1", 0)
thread = threading.Thread(target=server.serve_forever, daemon=True)
thread.start()
base = f"http://127.0.0.1:{server.server_address[1]}"
print(f"service up at {base}\n")


def get(path):
    with urllib.request.urlopen(base + path, timeout=10) as resp:
        return resp.status, resp.headers.get("Content-Type"), resp.read()


def post(path, payload):
    req = urllib.request.Request(
        base + path,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    with urllib.request.urlopen(req, timeout=30) as resp:
        return json.loads(resp.read())


status, ctype, body = get("/api/health")
print(f"GET /api/health -> {status} {body.decode()}")

first = post("/api/translate", {"text": "He taked my toy!"})
print(f"\nPOST /api/translate 'He taked my toy!'")
print(f"  corrected: {first['corrected']}")
print(f"  images:    {first['images']}")
print(f"  session:   {first['session'][:8]}...")

followup = post("/api/translate", {"text": "it is big", "session": first["session"]})
print(f"\nPOST /api/translate 'it is big' (same session)")
print(f"  corrected: {followup['corrected']}")
print(f"  images:    {followup['images']}  <- 'it' resolved via session context")

status, ctype, body = get("/api/pictograms/toy")
print(f"\nGET /api/pictograms/toy -> {status}, {ctype}, {len(body)} bytes")

corpus = data_path("eval", "tpa_demo.jsonl").read_text(encoding="utf-8")
matrix = post("/api/eval/tpa", {"corpus": corpus})
print("\nPOST /api/eval/tpa (inline corpus), case (1) scores:")
print(f"  plain:        {matrix['tpa']['1']['score']:.2f}")
print(f"  with penalty: {matrix['tpa_with_penalty']['1']['score']:.2f}")

server.shutdown()
thread.join()
server.server_close()
print("\nservice stopped")
