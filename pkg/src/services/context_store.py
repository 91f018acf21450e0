"""
Context store: builds endomorphism contexts from descriptors and caches them.
"""
import logging
import threading
from typing import Dict, Optional, Tuple

from src.algebra.braiding import Braiding, builtin
from src.algebra.endomorphisms import EndoContext, build_context
from src.algebra.exterior import ExteriorContext
from src.schemas.documents import BraidingDocument, ContextDescriptor
from src.utils.exceptions import DocumentError
from src.utils.settings import Settings, get_settings

logger = logging.getLogger(__name__)

# builtins whose exterior-type algebra ends at grade N + 1
TERMINATING_BUILTINS = ("sl-exterior", "sl-dual")


class ContextStore:
    """
    Repository of braidings and contexts.

    Builtin braidings are addressed by name and N, custom braidings by the
    sha256 of their canonical document once registered. Contexts are built
    once per descriptor and shared; reads after construction are lock-free.
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self._braidings: Dict[str, Braiding] = {}
        self._contexts: Dict[Tuple, EndoContext] = {}
        self._descriptors: Dict[int, ContextDescriptor] = {}
        self._exterior: Dict[int, ExteriorContext] = {}
        self._lock = threading.Lock()

    def builtin_descriptor(self, name: str, N: int, bound: Optional[int] = None) -> ContextDescriptor:
        """Descriptor of a builtin; terminating builtins are always profiled one grade past N + 1."""
        if name in TERMINATING_BUILTINS:
            bound = N + 2
        elif bound is None:
            bound = self.settings.default_max_p
        return ContextDescriptor(builtin=name, N=N, bound=bound)

    def register(self, doc: BraidingDocument, bound: Optional[int] = None) -> ContextDescriptor:
        """Validate a braiding document and return a descriptor addressing it."""
        sha = doc.sha256()
        with self._lock:
            if sha not in self._braidings:
                self._braidings[sha] = doc.to_braiding()
                logger.info("registered braiding %s (dim %d)", sha[:12], doc.dim)
        return ContextDescriptor(braiding_sha256=sha, bound=bound or self.settings.default_max_p)

    def braiding(self, descriptor: ContextDescriptor) -> Braiding:
        if descriptor.builtin is not None:
            return builtin(descriptor.builtin, descriptor.N)
        try:
            return self._braidings[descriptor.braiding_sha256]
        except KeyError:
            raise DocumentError(
                f"braiding {descriptor.braiding_sha256} is not registered; pass its document with --braiding"
            )

    def context(self, descriptor: ContextDescriptor) -> EndoContext:
        if descriptor.builtin in TERMINATING_BUILTINS:
            descriptor = self.builtin_descriptor(descriptor.builtin, descriptor.N)
        key = descriptor.key
        ctx = self._contexts.get(key)
        if ctx is not None:
            return ctx
        with self._lock:
            ctx = self._contexts.get(key)
            if ctx is None:
                b = self.braiding(descriptor)
                ctx = build_context(b, descriptor.bound)
                self._contexts[key] = ctx
                self._descriptors[id(ctx)] = descriptor
        return ctx

    def descriptor_of(self, ctx: EndoContext) -> ContextDescriptor:
        try:
            return self._descriptors[id(ctx)]
        except KeyError:
            raise DocumentError(f"context '{ctx.name}' was not built by this store")

    def exterior(self, N: int) -> ExteriorContext:
        """The wedge-basis view of the sl-exterior context at N."""
        ext = self._exterior.get(N)
        if ext is not None:
            return ext
        ctx = self.context(self.builtin_descriptor("sl-exterior", N))
        with self._lock:
            ext = self._exterior.get(N)
            if ext is None:
                ext = ExteriorContext(ctx)
                self._exterior[N] = ext
        return ext
