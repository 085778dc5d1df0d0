from fastapi import FastAPI
import logging

from rubyeval.config import settings
from rubyeval.routes import scoring

logger = logging.getLogger(__name__)

app = FastAPI(title="RUBY Evaluation API", description="Similarity scores for migrated source code")

app.include_router(scoring.router)


@app.on_event("startup")
async def startup_event():
    logging.basicConfig(level=settings.LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
    logger.info(f"Scoring with token mode {settings.TOKEN_MODE}, BLEU max_n {settings.BLEU_MAX_N}, "
                f"GRS path length {settings.GRS_MAX_PATH_LENGTH}")


@app.get("/")
def read_root():
    return {"status": "online", "token_mode": settings.TOKEN_MODE, "bleu_max_n": settings.BLEU_MAX_N}
