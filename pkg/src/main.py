"""
qtrace command line: verify identity suites, compute traces and products,
print component bases and grade profiles.
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional, Tuple, Type

from pydantic import BaseModel, ValidationError

from src.api.basis import BasisRequest, run_basis
from src.api.common import BraidingRequest
from src.api.product import PRODUCTS, ProductRequest, run_product
from src.api.profile import ProfileRequest, run_profile
from src.api.trace import KINDS, TraceRequest, run_trace
from src.api.verify import VerifyRequest, run_verify
from src.schemas.documents import dumps
from src.schemas.responses import ErrorResponse
from src.services.context_store import ContextStore
from src.utils.exceptions import QTraceError
from src.utils.log_config import configure_logging
from src.utils.settings import LOG_LEVELS, get_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_UNEXPECTED = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--braiding", default="sl-exterior", help="sl-exterior, sl-dual, flip, or a braiding document")
    common.add_argument("--N", dest="N", type=int, default=1, help="rank: V = Q(q)^(N+1)")
    common.add_argument("--max-p", dest="max_p", type=int, default=None, help="largest grade to enumerate")
    common.add_argument("--q0", default=None, help="also print Scalars evaluated at this rational q")
    common.add_argument("--format", default="text", choices=("json", "text"))
    common.add_argument("--force", action="store_true", help="lift the rank and enumeration bounds")
    common.add_argument("--log-level", dest="log_level", type=str.upper, choices=LOG_LEVELS, default=None)

    parser = argparse.ArgumentParser(prog="qtrace", description="Exact q-traces on quantum symmetric algebras")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="run an identity suite")
    verify.add_argument("--suite", default="all")

    trace = commands.add_parser("trace", parents=[common], help="Tr_q and tr_q of an endomorphism document")
    trace.add_argument("input")
    trace.add_argument("--kind", default="both", choices=KINDS)

    product = commands.add_parser("product", parents=[common], help="product of two endomorphism documents")
    product.add_argument("a")
    product.add_argument("b")
    product.add_argument("--which", required=True, choices=tuple(PRODUCTS))

    commands.add_parser("basis", parents=[common], help="component bases as sparse tensors")
    commands.add_parser("profile", parents=[common], help="grade profile and top grade")
    return parser


def _request_fields(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("command", "log_level") and v is not None}


REQUESTS: Dict[str, Type[BraidingRequest]] = {
    "verify": VerifyRequest,
    "trace": TraceRequest,
    "product": ProductRequest,
    "basis": BasisRequest,
    "profile": ProfileRequest,
}


def dispatch(args: argparse.Namespace, store: ContextStore) -> Tuple[BaseModel, int, str]:
    """Run one command; returns the result model, the exit code and the output format."""
    request = REQUESTS[args.command](**_request_fields(args))
    with request.enumeration_scope():
        if isinstance(request, VerifyRequest):
            report = run_verify(request, store)
            return report, EXIT_OK if report.passed else EXIT_IDENTITY_FAILURE, request.format
        if isinstance(request, TraceRequest):
            return run_trace(request, store), EXIT_OK, request.format
        if isinstance(request, ProductRequest):
            # documents are always JSON
            return run_product(request, store), EXIT_OK, "json"
        if isinstance(request, BasisRequest):
            return run_basis(request, store), EXIT_OK, request.format
        return run_profile(request, store), EXIT_OK, request.format


def render(result: BaseModel, fmt: str) -> str:
    if fmt == "json":
        return dumps(result).rstrip("\n")
    return result.to_text()


def _report_error(payload: ErrorResponse, fmt: str) -> int:
    if fmt == "json":
        print(dumps(payload).rstrip("\n"), file=sys.stderr)
    else:
        print(f"error: {payload.error}: {payload.detail}", file=sys.stderr)
    return payload.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

    fmt = args.format
    try:
        settings = get_settings()
        configure_logging(settings, args.log_level)
        result, code, fmt_out = dispatch(args, ContextStore(settings))
    except QTraceError as exc:
        return _report_error(ErrorResponse(**exc.to_payload()), fmt)
    except ValidationError as exc:
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'request'}: {err['msg']}" for err in exc.errors()
        )
        return _report_error(ErrorResponse(error="ValidationError", detail=detail, exit_code=EXIT_INPUT_ERROR), fmt)
    except Exception:
        logger.exception("unexpected error")
        return _report_error(
            ErrorResponse(error="InternalError", detail="An unexpected error occurred", exit_code=EXIT_UNEXPECTED), fmt
        )

    print(render(result, fmt_out))
    return code


if __name__ == "__main__":
    sys.exit(main())
