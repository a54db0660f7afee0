"""End-to-end inference service: context -> reply text, emotion, AU, face."""

from emoface.service.config import ServiceConfig, resolve_seed
from emoface.service.core import PipelineService, Reply, Session

__all__ = ["PipelineService", "Reply", "ServiceConfig", "Session", "resolve_seed"]
