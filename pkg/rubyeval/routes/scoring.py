from fastapi import APIRouter, File, HTTPException, UploadFile
from fastapi.concurrency import run_in_threadpool
from pydantic import BaseModel
from typing import Optional
import logging

from rubyeval.config import settings
from rubyeval.core.metrics import BpMode, MetricOptions, ScoreRecord, StsNorm, ZeroPolicy, ruby
from rubyeval.core.minilang import TokenMode, parse_source
from rubyeval.core.pdg import build_pdg, is_applicable
from rubyeval.harness.corpus import CorpusValidationError, parse_corpus
from rubyeval.harness.scoring import CorpusReport, score_corpus

router = APIRouter()
logger = logging.getLogger(__name__)


class ScoreRequest(BaseModel):
    reference: str
    candidate: str
    pair_id: str = ""
    semantic_raw: Optional[int] = None
    max_n: Optional[int] = None
    bp_mode: Optional[BpMode] = None
    zero_ngram_policy: Optional[ZeroPolicy] = None
    token_mode: Optional[TokenMode] = None
    sts_norm: Optional[StsNorm] = None


class CorpusResponse(BaseModel):
    report: CorpusReport
    rejected: list[str] = []


class PdgRequest(BaseModel):
    source: str


class PdgResponse(BaseModel):
    applicable: bool
    reason: Optional[str] = None
    nodes: int = 0
    edges: int = 0
    dot: Optional[str] = None


def options_for(req: ScoreRequest) -> MetricOptions:
    """Server defaults from settings, overridden per request."""
    options = MetricOptions.from_settings(settings)
    bleu = options.bleu.model_copy(update={
        k: v for k, v in (("max_n", req.max_n), ("bp_mode", req.bp_mode),
                          ("zero_ngram_policy", req.zero_ngram_policy)) if v is not None
    })
    if bleu.max_n < 1:
        raise HTTPException(status_code=400, detail="max_n must be >= 1")
    updates = {"bleu": bleu}
    if req.token_mode is not None:
        updates["token_mode"] = req.token_mode
    if req.sts_norm is not None:
        updates["sts_norm"] = req.sts_norm
    return options.model_copy(update=updates)


@router.post("/score", response_model=ScoreRecord)
def score(req: ScoreRequest):
    """Scores one reference/candidate pair."""
    if req.semantic_raw is not None and not 0 <= req.semantic_raw <= 4:
        raise HTTPException(status_code=400, detail="semantic_raw must be between 0 and 4")
    semantic = None if req.semantic_raw is None else req.semantic_raw / 4
    try:
        return ruby(req.reference, req.candidate, options_for(req), pair_id=req.pair_id, semantic=semantic)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/corpus", response_model=CorpusResponse)
async def score_uploaded_corpus(file: UploadFile = File(...)):
    """Scores a JSON-lines corpus upload."""
    try:
        text = (await file.read()).decode("utf-8")
    except UnicodeDecodeError:
        raise HTTPException(status_code=400, detail="corpus must be UTF-8 text")
    try:
        corpus = parse_corpus(text, origin=file.filename or "<upload>")
    except CorpusValidationError as e:
        raise HTTPException(status_code=400, detail={"message": str(e), "errors": [str(x) for x in e.errors]})

    options = MetricOptions.from_settings(settings)
    report = await run_in_threadpool(score_corpus, corpus.pairs, options, settings.WORKERS)
    return CorpusResponse(report=report, rejected=[str(x) for x in corpus.errors])


@router.post("/pdg", response_model=PdgResponse)
def dump_pdg(req: PdgRequest):
    """Dependence graph of one method as DOT text."""
    outcome = parse_source(req.source)
    if not outcome.parsed:
        raise HTTPException(status_code=400, detail=f"source does not parse: {outcome.diagnostics[0]}")
    graph = build_pdg(outcome.tree)
    if not is_applicable(graph):
        return PdgResponse(applicable=False, reason=graph.reason)
    return PdgResponse(applicable=True, nodes=len(graph.nodes), edges=len(graph.edges), dot=graph.to_dot())
