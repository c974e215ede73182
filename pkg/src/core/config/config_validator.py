from typing import Dict, Any, List
import jsonschema
import logging

STAGES = [
    "enum-groups",
    "classify-stabilizers",
    "gen-realizations",
    "thin",
    "desaturate",
    "growth",
    "iso-classes",
]


class ConfigValidator:
    """Validates configuration files against defined schemas."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

        self.schemas = {
            "pipeline": {
                "type": "object",
                "required": ["pipeline", "search", "runtime", "logging"],
                "properties": {
                    "pipeline": {
                        "type": "object",
                        "required": ["dimension", "stages"],
                        "properties": {
                            "dimension": {"type": "integer", "minimum": 1},
                            "max_dimension": {"type": "integer", "minimum": 1},
                            "stages": {
                                "type": "array",
                                "items": {"type": "string", "enum": STAGES},
                                "minItems": 1
                            },
                            "output_directory": {"type": "string"}
                        }
                    },
                    "search": {
                        "type": "object",
                        "required": ["radius", "radius_cap", "growth_radii"],
                        "properties": {
                            "radius": {"type": "integer", "minimum": 0},
                            "radius_cap": {"type": "integer", "minimum": 1},
                            "growth_radii": {"type": "integer", "minimum": 1},
                            "match_limit": {"type": "integer", "minimum": 1}
                        }
                    },
                    "runtime": {
                        "type": "object",
                        "required": ["jobs"],
                        "properties": {
                            "jobs": {"type": "integer", "minimum": 1},
                            "checkpoint_directory": {"type": "string"},
                            "stage_budget_seconds": {"type": ["number", "null"], "exclusiveMinimum": 0}
                        }
                    },
                    "logging": {
                        "type": "object",
                        "properties": {
                            "log_level": {"type": "string", "enum": ["DEBUG", "INFO", "WARNING", "ERROR"]},
                            "log_directory": {"type": "string"}
                        }
                    }
                }
            }
        }

    def validate_config(self, config_type: str, config_data: Dict[str, Any]) -> List[str]:
        """Validate configuration data against its schema."""
        errors = []

        try:
            if config_type in self.schemas:
                jsonschema.validate(instance=config_data, schema=self.schemas[config_type])
            else:
                errors.append(f"No schema defined for config type: {config_type}")

        except jsonschema.exceptions.ValidationError as e:
            errors.append(f"Configuration validation error: {e.message}")
        except jsonschema.exceptions.SchemaError as e:
            errors.append(f"Schema error: {str(e)}")

        return errors

    def validate_stages(self, stages: List[str]) -> List[str]:
        """Stage names must be known and listed in pipeline order."""
        errors = [f"Unknown stage '{stage}'" for stage in stages if stage not in STAGES]
        if not errors:
            positions = [STAGES.index(stage) for stage in stages]
            if positions != sorted(positions):
                errors.append("Stages must follow pipeline order: " + ", ".join(STAGES))
        return errors
