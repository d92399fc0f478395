from fastapi import APIRouter, HTTPException

from twoway.core.errors import ParseError
from twoway.models.bounds import CapacityEngine, flux_limit_rows, limit_rows_pass
from twoway.models.channels import check_channel_stretch
from twoway.models.composition import km_to_eta
from twoway.models.qkd_rates import rate_with_flag
from twoway.schemas.channel import parse_channel_spec
from twoway.schemas.protocol import parse_protocol
from twoway.schemas.report import (
    BoundReport,
    CapacityRequest,
    QkdRateRequest,
    QkdRateResponse,
    StretchReport,
    VerifyLimitRequest,
    VerifyLimitResponse,
)
import math

router = APIRouter()
engine = CapacityEngine()


@router.post("/capacity", response_model=BoundReport)
async def capacity(request: CapacityRequest):
    """Channel spec → lower/upper bounds with provenance."""
    try:
        return engine.evaluate(request.spec)
    except ParseError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Capacity evaluation failed: {str(e)}")


@router.post("/qkd_rate", response_model=QkdRateResponse)
async def qkd_rate(request: QkdRateRequest):
    try:
        protocol = parse_protocol(request.protocol)
        if request.eta is not None:
            eta = request.eta
        elif request.distance_km is not None:
            eta = km_to_eta(request.distance_km)
        else:
            raise ValueError("Give either eta or distance_km")
        rate, clamped = rate_with_flag(protocol, eta)
        capacity = math.inf if eta >= 1.0 else -math.log2(1.0 - eta)
        return QkdRateResponse(
            protocol=protocol.token, eta=eta, rate=rate, clamped=clamped, capacity=capacity
        )
    except ParseError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Rate evaluation failed: {str(e)}")


@router.post("/telesim_check", response_model=StretchReport)
async def telesim_check(request: CapacityRequest):
    try:
        return check_channel_stretch(parse_channel_spec(request.spec))
    except ParseError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Teleportation check failed: {str(e)}")


@router.post("/verify_limit", response_model=VerifyLimitResponse)
async def verify_limit(request: VerifyLimitRequest):
    """Finite-μ flux against its closed-form limit."""
    try:
        rows = flux_limit_rows(parse_channel_spec(request.spec), request.mu_list)
        return VerifyLimitResponse(spec=request.spec, rows=rows, passed=limit_rows_pass(rows))
    except ParseError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Limit verification failed: {str(e)}")
