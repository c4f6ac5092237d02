"""
lexvote HTTP entry point.
FastAPI app serving trained model bundles and the scoring / agreement tools.

Run with:  uvicorn lexvote.main:app   (or: python -m lexvote serve)
"""
import logging

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from lexvote import __version__
from lexvote.config import model_dir
from lexvote.exceptions import LexvoteError

logger = logging.getLogger(__name__)

app = FastAPI(title="lexvote", description="Word sense disambiguation with bagged decision tree ensembles")

# Import and register route modules
from lexvote.routes import classify_routes, eval_routes  # noqa: E402

app.include_router(classify_routes.router)
app.include_router(eval_routes.router)


@app.get("/health")
def health_check():
    return {"status": "ok", "version": __version__, "model_dir": str(model_dir())}


@app.exception_handler(LexvoteError)
async def lexvote_exception_handler(request: Request, exc: LexvoteError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(Exception)
async def generic_exception_handler(request: Request, exc: Exception):
    logger.exception("Unhandled error on %s", request.url)
    return JSONResponse(status_code=500, content={"detail": str(exc), "path": str(request.url)})
