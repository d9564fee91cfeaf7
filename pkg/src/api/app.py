"""
FastAPI application for the equalizer design service.

This module exposes the design pipeline over HTTP: submit an experiment
config to get a design record, or submit a record to have it verified again.
"""

from fastapi import FastAPI, HTTPException
from starlette.middleware.cors import CORSMiddleware

from src.core.orchestrator import Orchestrator
from src.core.schemas import DesignRecord, ExperimentConfig, config_schema

app = FastAPI(
    title="Coherent Equalizer Designer",
    description="Synthesis and verification of passive coherent equalizers for linear quantum channels",
    version="1.0.0",
)
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# =========================================
# INITIALIZATION
# =========================================
orc = Orchestrator()


# =========================================
# HELPER FUNCTIONS
# =========================================

def failure_detail(result: dict) -> dict:
    """Error JSON of a failed pipeline result, as sent in a 400 response."""
    return {
        "error": result.get("code"),
        "message": result.get("error"),
        "stage": result.get("stage", "unknown"),
        "details": result.get("details", {}),
    }


# =========================================
# ENDPOINTS
# =========================================

@app.get("/health")
async def health_check():
    """
    Health check endpoint.

    Returns:
        dict: {"status": "ok"}
    """
    return {"status": "ok"}


@app.get("/schema")
async def schema():
    """JSON schema of the experiment config."""
    return config_schema()


@app.post("/design")
async def design(config: ExperimentConfig):
    """
    Synthesize and verify an equalizer without writing files.

    Args:
        config: Experiment config (validated by FastAPI, 422 on schema errors)

    Returns:
        dict: The design record, including its verification report

    Raises:
        HTTPException: 400 if synthesis or verification fails, 500 on
            unexpected errors
    """
    try:
        result = orc.run(config, write=False)

        if "error" in result:
            raise HTTPException(status_code=400, detail=failure_detail(result))

        return result["record"]

    except HTTPException:
        raise
    except Exception as e:
        raise HTTPException(
            status_code=500,
            detail=f"Design failed: {str(e)}"
        )


@app.post("/verify")
async def verify(record: DesignRecord):
    """
    Re-verify a design record on a fresh dense grid.

    Returns:
        dict: {"status": "completed", "report": dict, "certificate": dict | None}

    Raises:
        HTTPException: 400 if the record cannot be rebuilt or a check fails,
            500 on unexpected errors
    """
    try:
        result = orc.verify_record(record)

        if "error" in result:
            detail = failure_detail(result)
            if "report" in result:
                detail["report"] = result["report"]
            raise HTTPException(status_code=400, detail=detail)

        return result

    except HTTPException:
        raise
    except Exception as e:
        raise HTTPException(
            status_code=500,
            detail=f"Verification failed: {str(e)}"
        )
