#!/usr/bin/env python3

from pathlib import Path
from typing import Dict

from .errors import ConfigError, DomainError
from .gridspec import GridSpec
from .gridworld import GridWorld, WorldType
from .transitions import (InitialDistribution, TransitionMatrix, build_q0, build_q1, build_q2,
                          default_r)


class WorldLoader:
    """A class to build and cache grid-worlds by selector (q0 | q1 | q2 | JSON file)."""

    def __init__(self, side: int = 4) -> None:
        """
        Initialize the loader for a given grid side. Selectors naming a file ignore
        the side and use the one stored in the file.
        """
        self.side: int = side
        # Maps selector to world
        self.worlds: Dict[str, GridWorld] = {}

    @staticmethod
    def world_type(selector: str) -> WorldType:
        """Maps a selector string to its WorldType"""
        for world_type in (WorldType.Q0, WorldType.Q1, WorldType.Q2):
            if selector == world_type.value:
                return world_type
        return WorldType.FILE

    def get_world(self, selector: str) -> GridWorld:
        """
        Retrieve the world for a selector, building it on first use.
        Args:
            selector (str): 'q0', 'q1', 'q2' or the path of a transition-matrix JSON file.
        Returns:
            GridWorld: The world, with the uniform initial distribution.
        """
        if selector not in self.worlds:
            self.worlds[selector] = self._build(selector)
        return self.worlds[selector]

    def _build(self, selector: str) -> GridWorld:
        world_type = self.world_type(selector)
        if world_type == WorldType.FILE:
            return self._parse_world_file(Path(selector))

        spec = GridSpec(self.side)
        if world_type == WorldType.Q0:
            transitions = build_q0(spec)
        elif world_type == WorldType.Q1:
            transitions = build_q1(spec, default_r(spec))
        else:
            r = default_r(spec)
            transitions = build_q2(spec, r[0], r[1])
        return GridWorld(selector, spec, transitions, InitialDistribution.uniform(spec.cell_count))

    def _parse_world_file(self, file_path: Path) -> GridWorld:
        """
        Parse a transition-matrix JSON file {"side": s, "rows": [...]}.
        Raises:
            ConfigError: if the file is missing or malformed.
        """
        if not file_path.is_file():
            raise ConfigError(f"world file '{file_path}' does not exist")
        try:
            spec, transitions = TransitionMatrix.from_json(file_path.read_text(encoding="utf-8"))
        except (DomainError, ValueError) as e:
            raise ConfigError(f"error parsing {file_path}: {e}") from e
        return GridWorld(file_path.stem, spec, transitions, InitialDistribution.uniform(spec.cell_count))
