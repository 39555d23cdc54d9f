"""Read-only HTTP service over one exploration bundle.

The bundle is loaded once and never mutated; every endpoint is a pure
function of it (plus the threshold query parameter), so concurrent reads are
safe and identical requests return identical responses.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles

from .features import assign_clusters


def create_app(bundle: dict, ui_dir=None) -> FastAPI:
    app = FastAPI(title="siglearn bundle service")
    scores = np.asarray(bundle["scores"], dtype=np.float64)

    @app.get("/api/meta")
    def meta():
        return bundle["meta"]

    @app.get("/api/series")
    def series():
        return {"series": bundle["series"], "labels": bundle["labels"]}

    @app.get("/api/signatures")
    def signatures():
        return bundle["signatures"]

    @app.get("/api/scores")
    def scores_endpoint():
        return {"scores": bundle["scores"], "best_offsets": bundle["best_offsets"]}

    @app.get("/api/clusters")
    def clusters(threshold: str | None = None):
        if threshold is None:
            return bundle["clusters"]
        try:
            t = float(threshold)
        except ValueError:
            raise HTTPException(status_code=400,
                                detail=f"threshold {threshold!r} is not a number")
        if not np.isfinite(t) or not (0.0 <= t <= 1.0):
            raise HTTPException(status_code=400,
                                detail=f"threshold {t} outside [0, 1]")
        assigned = assign_clusters(scores, t)
        return [{"cluster": c, "members": flags} for c, flags in assigned]

    @app.get("/api/kde")
    def kde():
        return bundle["kde"]

    @app.get("/api/dtw")
    def dtw():
        return {"dtw": bundle["dtw"]}

    @app.get("/api/bundle")
    def whole_bundle():
        return bundle

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def serve(bundle: dict, port: int, host: str = "127.0.0.1", ui_dir=None) -> None:
    import uvicorn

    uvicorn.run(create_app(bundle, ui_dir=ui_dir), host=host, port=port)
