"""Reading a matroid specification from a file or stdin."""
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from app.config import settings
from app.errors import SpecParseError
from app.models import spec_adapter
from app.services.matroid_kernel import Matroid, ValidationLevel

logger = logging.getLogger(__name__)


def read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(f"cannot read {source}: {exc.strerror}") from exc


def parse_matroid(text: str) -> Matroid:
    try:
        spec = spec_adapter.validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise SpecParseError(f"{location or 'spec'}: {first['msg']}") from exc
    M = spec.build(ValidationLevel(settings.CLI_VALIDATION))
    logger.info("loaded %r", M)
    return M


def read_matroid(source: str) -> Matroid:
    return parse_matroid(read_text(source))
