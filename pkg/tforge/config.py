"""Configuration and defaults for the synthesis pipeline.

This module provides the SynthConfig class which centralizes the numeric
floors, search limits and feasibility caps used across the package. The
class stores class-level defaults that can be overridden via
``from_config`` or ``from_file`` when a project-specific configuration is
required. The ``TFORGE_SEED`` environment variable overrides the default
seed at import time.
"""

import json
import logging
import os

logger = logging.getLogger(__name__)


class SynthConfig(object):
    """Configuration for synthesis precision, search limits and caps.

    Attributes:
        eps_min (float): Smallest accepted precision. Default 1e-5.
        max_depth (int): Longest H/T word (in blocks) a search may return. Default 108,
            room for a table pair and two near-identity corrections.
        half_depth (int): Block depth of the precomputed word table. Default 18.
        table_size (int): Maximum number of entries in the word table. Default 131072.
        refine_radius (float): Operator-norm radius of the near-identity corrections
            and of the pairs they extend. Default 0.06.
        refine_prefixes (int): Pairs extended by two corrections. Default 256.
        gamma_min (float): Overlap floor for randomised flattening. Default 0.63.
        k_max (int): Largest number of amplification rounds. Default 8.
        prune (float): Amplitudes below this modulus are dropped by the simulator.
        flatten_budget (int): Sign tables tried per flattening search. Default 256.
        exhaustive_qubits (int): Up to this many qubits the flattening search tries
            every sign table. Default 4.
        max_qubits_state (int): Feasibility cap for state tasks. Default 8.
        max_qubits_diagonal (int): Feasibility cap for diagonal tasks. Default 10.
        max_qubits_oracle (int): Feasibility cap for oracle tasks. Default 12.
        max_qubits_dense (int): Cap for dense operator checks (mass, batched). Default 10.
        verify (bool): Simulate every synthesized circuit and record its error.
        seed (int): Default seed for randomised searches.
    """

    eps_min = 1e-5
    max_depth = 108
    half_depth = 18
    table_size = 131072
    refine_radius = 0.06
    refine_prefixes = 256
    gamma_min = 0.63
    k_max = 8
    prune = 1e-14
    flatten_budget = 256
    exhaustive_qubits = 4
    max_qubits_state = 8
    max_qubits_diagonal = 10
    max_qubits_oracle = 12
    max_qubits_dense = 10
    verify = True
    seed = int(os.environ.get("TFORGE_SEED", 0))

    @classmethod
    def from_config(cls, config):
        """Update the configuration from a mapping.

        Args:
            config (Mapping[str, Any]): Keys matching attribute names of SynthConfig.
                Missing keys keep their current value.

        Returns:
            type: The SynthConfig class with attributes updated.

        Notes:
            This method updates class-level attributes so the change is global.
        """
        unknown = set(config) - set(cls.as_dict())
        if unknown:
            raise KeyError(f"Unknown configuration keys: {sorted(unknown)}")
        for key, value in config.items():
            setattr(cls, key, type(getattr(cls, key))(value))
        if cls.half_depth * 2 > cls.max_depth:
            logger.warning(
                f"half_depth {cls.half_depth} exceeds max_depth/2; words are capped at {cls.max_depth}"
            )
        return cls

    @classmethod
    def from_file(cls, file):
        """Update the configuration from a JSON file.

        Args:
            file (str): Path to a JSON file containing configuration keys.

        Returns:
            type: The SynthConfig class with attributes updated.
        """
        with open(file) as f:
            config = json.load(f)
        return cls.from_config(config)

    @classmethod
    def to_json(cls, filename=None):
        """Write the config to a JSON string or file and return the JSON string."""
        if filename:
            with open(filename, "w") as f:
                json.dump(cls.as_dict(), f, indent=2)
        return json.dumps(cls.as_dict())

    @classmethod
    def as_dict(cls):
        """Return the SynthConfig as a dictionary."""
        return {
            "eps_min": cls.eps_min,
            "max_depth": cls.max_depth,
            "half_depth": cls.half_depth,
            "table_size": cls.table_size,
            "refine_radius": cls.refine_radius,
            "refine_prefixes": cls.refine_prefixes,
            "gamma_min": cls.gamma_min,
            "k_max": cls.k_max,
            "prune": cls.prune,
            "flatten_budget": cls.flatten_budget,
            "exhaustive_qubits": cls.exhaustive_qubits,
            "max_qubits_state": cls.max_qubits_state,
            "max_qubits_diagonal": cls.max_qubits_diagonal,
            "max_qubits_oracle": cls.max_qubits_oracle,
            "max_qubits_dense": cls.max_qubits_dense,
            "verify": cls.verify,
            "seed": cls.seed,
        }

    @classmethod
    def cap_for(cls, task: str) -> int:
        """Return the qubit feasibility cap for a benchmark task."""
        caps = {
            "state": cls.max_qubits_state,
            "state-lks": cls.max_qubits_state,
            "diagonal": cls.max_qubits_diagonal,
            "oracle": cls.max_qubits_oracle,
            "batched": cls.max_qubits_dense,
            "mass": cls.max_qubits_dense,
        }
        if task not in caps:
            raise ValueError(f"Invalid task '{task}'. Must be one of {sorted(caps)}")
        return caps[task]

    def __repr__(self) -> str:
        """Return an unambiguous string representation of the SynthConfig."""
        items = ", ".join(f"{k}={v}" for k, v in self.as_dict().items())
        return f"SynthConfig({items})"

    def __str__(self) -> str:
        """Return a human-readable formatted string representation of the SynthConfig."""
        return (
            "SynthConfig - Synthesis Settings\n"
            "================================\n"
            f"Epsilon floor:     {self.eps_min}\n"
            f"Word depth cap:    {self.max_depth}\n"
            f"Table depth:       {self.half_depth}\n"
            f"Table size:        {self.table_size}\n"
            f"Refine radius:     {self.refine_radius}\n"
            f"Refine prefixes:   {self.refine_prefixes}\n"
            f"Gamma floor:       {self.gamma_min}\n"
            f"Max AA rounds:     {self.k_max}\n"
            f"Prune threshold:   {self.prune}\n"
            f"Flatten budget:    {self.flatten_budget}\n"
            f"Exhaustive below:  {self.exhaustive_qubits}\n"
            f"State qubit cap:   {self.max_qubits_state}\n"
            f"Diagonal cap:      {self.max_qubits_diagonal}\n"
            f"Oracle cap:        {self.max_qubits_oracle}\n"
            f"Dense check cap:   {self.max_qubits_dense}\n"
            f"Verify:            {self.verify}\n"
            f"Seed:              {self.seed}\n"
        )
