"""
The profile command: dimensions of S_σ^p(V) and the top grade.
"""
from math import comb

from src.api.common import BraidingRequest
from src.schemas.responses import ProfileReport
from src.services.context_store import TERMINATING_BUILTINS, ContextStore


class ProfileRequest(BraidingRequest):
    pass


def run_profile(request: ProfileRequest, store: ContextStore) -> ProfileReport:
    descriptor = request.descriptor(store)
    ctx = store.context(descriptor)
    profile = ctx.profile
    expected = None
    if descriptor.builtin in TERMINATING_BUILTINS:
        expected = [comb(request.N + 1, p) for p in range(profile.bound + 1)]
    elif descriptor.builtin == "flip":
        d = request.N + 1
        expected = [comb(d + p - 1, p) for p in range(profile.bound + 1)]
    return ProfileReport(
        context=ctx.name,
        bound=profile.bound,
        dims=list(profile.dims),
        top=profile.top,
        hecke_param=request.scalar(ctx.nu),
        expected_dims=expected,
    )
