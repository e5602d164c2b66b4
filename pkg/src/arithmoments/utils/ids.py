import uuid
from typing import Any, Dict

from arithmoments.utils.hashing import sha256_hash_json

NAMESPACE_EXPERIMENT = uuid.UUID("3f1c2a64-8d0e-5b7a-9c41-6e2f0d8b1a57")


def generate_experiment_id(command: str, config: Dict[str, Any]) -> str:
    """Deterministic id of an experiment: same command and config, same id."""
    key = f"{command}|{sha256_hash_json(config)}"
    return str(uuid.uuid5(NAMESPACE_EXPERIMENT, key))


def generate_run_id() -> str:
    return str(uuid.uuid4())
