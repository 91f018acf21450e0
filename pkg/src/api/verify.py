"""
The verify command: run an identity suite.
"""
from pydantic import Field, field_validator

from src.agents.verification_agent import VerificationAgent
from src.api.common import BraidingRequest
from src.schemas.responses import SuiteReport
from src.services.context_store import ContextStore
from src.utils.validators import validate_suite


class VerifyRequest(BraidingRequest):
    suite: str = Field(default="all", description="Suite name or 'all'")

    @field_validator("suite")
    @classmethod
    def validate_suite_name(cls, v):
        return validate_suite(v)


def run_verify(request: VerifyRequest, store: ContextStore) -> SuiteReport:
    agent = VerificationAgent(store, store.settings)
    descriptor = None if request.is_builtin else request.descriptor(store)
    braiding = request.braiding if request.is_builtin else "custom"
    return agent.run(request.suite, request.N, braiding, request.max_p, descriptor)
