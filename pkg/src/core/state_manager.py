from typing import Any, Dict, List
from pathlib import Path
import logging
import pickle

from pydantic import BaseModel


class CheckpointState(BaseModel):
    """Progress of one stage under one configuration digest."""

    stage: str
    config_digest: str
    completed: List[str] = []
    payloads: Dict[str, str] = {}


class StateManager:
    """Checkpoint persistence: one JSON state file per stage, one pickled
    payload per finished work unit."""

    def __init__(self, directory: str, config_digest: str):
        self.logger = logging.getLogger(__name__)
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.config_digest = config_digest
        self._states: Dict[str, CheckpointState] = {}

    def _state_path(self, stage: str) -> Path:
        return self.directory / f"{stage}.json"

    def load(self, stage: str) -> CheckpointState:
        """State of ``stage``; a missing or stale file gives a fresh state."""
        if stage in self._states:
            return self._states[stage]
        state = CheckpointState(stage=stage, config_digest=self.config_digest)
        path = self._state_path(stage)
        if path.exists():
            stored = CheckpointState.model_validate_json(path.read_text())
            if stored.config_digest == self.config_digest:
                state = stored
                self.logger.info(f"Resuming {stage}: {len(state.completed)} units done")
            else:
                self.logger.warning(f"Ignoring stale checkpoint for {stage} (digest {stored.config_digest})")
        self._states[stage] = state
        return state

    def save(self, state: CheckpointState) -> None:
        self._states[state.stage] = state
        path = self._state_path(state.stage)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(state.model_dump_json(indent=2))
        tmp.replace(path)

    def mark_done(self, stage: str, key: str, result: Any) -> None:
        state = self.load(stage)
        payload_dir = self.directory / stage
        payload_dir.mkdir(exist_ok=True)
        payload = payload_dir / f"{key}.pkl"
        with open(payload, "wb") as f:
            pickle.dump(result, f)
        if key not in state.completed:
            state.completed.append(key)
        state.payloads[key] = str(payload)
        self.save(state)

    def is_done(self, stage: str, key: str) -> bool:
        state = self.load(stage)
        return key in state.completed and Path(state.payloads.get(key, "")).exists()

    def load_result(self, stage: str, key: str) -> Any:
        with open(self.load(stage).payloads[key], "rb") as f:
            return pickle.load(f)

    def clear(self, stage: str) -> None:
        state = CheckpointState(stage=stage, config_digest=self.config_digest)
        self.save(state)
