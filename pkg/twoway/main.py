"""FastAPI entrypoint for the two-way capacity engine."""
from fastapi import FastAPI
from twoway import __version__
from twoway.api.v1 import capacity
from twoway.core.config import settings
import logging

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Two-Way Capacity Engine",
    description="Bounds and exact two-way assisted capacities of quantum channels",
    version=__version__
)

# Include API routes
app.include_router(capacity.router, prefix="/api/v1", tags=["capacity"])

@app.get("/")
async def root():
    """Health check endpoint."""
    return {
        "status": "healthy",
        "service": "Two-Way Capacity Engine",
        "version": __version__
    }

@app.get("/health")
async def health():
    """Production health check."""
    return {"status": "ok"}

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=settings.api_host, port=settings.api_port)
