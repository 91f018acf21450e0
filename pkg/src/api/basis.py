"""
The basis command: component bases of S_σ(V) as sparse tensors.
"""
from src.api.common import BraidingRequest
from src.schemas.responses import BasisReport, ComponentBasisReport
from src.services.context_store import ContextStore


class BasisRequest(BraidingRequest):
    pass


def run_basis(request: BasisRequest, store: ContextStore) -> BasisReport:
    ctx = store.context(request.descriptor(store))
    components = [
        ComponentBasisReport(grade=p, dim=basis.dim, vectors=[v.to_records() for v in basis.vectors])
        for p, basis in enumerate(ctx.bases)
    ]
    return BasisReport(context=ctx.name, components=components)
