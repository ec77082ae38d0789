"""Task scenarios: world geometry, success predicates, and the file loader.

A scenario is a set of objects, axis-aligned box regions, and one success
predicate: place an object in a region (released, not just hovered),
remove an object from a region, or wipe a set of contact targets with a
held object. Five scenarios ship compiled in (cup, trash, blanket,
cleaning, practice); custom ones load from a small block-format file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

from .blockfile import parse_blocks, parse_bool, parse_float, parse_floats
from .robot import Pose3, RobotState, WorldObject

__all__ = [
    "Scenario", "ScenarioObject", "Region", "PlaceInRegion",
    "RemoveFromRegion", "WipeContacts", "TaskProgress", "MalformedScenario",
    "load_scenario", "parse_scenario", "check_success", "update_progress",
    "BUNDLED_SCENARIOS", "DEFAULT_TIME_LIMIT_S",
]

DEFAULT_TIME_LIMIT_S = 840.0

_NAME_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class MalformedScenario(ValueError):
    """Scenario file failed validation; the message carries the location."""


@dataclass(frozen=True)
class Region:
    """Axis-aligned box in the world frame."""

    name: str
    min_corner: Pose3
    max_corner: Pose3

    def __post_init__(self) -> None:
        if not (self.min_corner.x < self.max_corner.x
                and self.min_corner.y < self.max_corner.y
                and self.min_corner.z < self.max_corner.z):
            raise ValueError(f"region {self.name!r} has a degenerate box")

    def contains(self, pose: Pose3) -> bool:
        return (self.min_corner.x <= pose.x <= self.max_corner.x
                and self.min_corner.y <= pose.y <= self.max_corner.y
                and self.min_corner.z <= pose.z <= self.max_corner.z)


@dataclass(frozen=True)
class ScenarioObject:
    object_id: str
    pose: Pose3
    attachable: bool = False


@dataclass(frozen=True)
class PlaceInRegion:
    """Success once the object rests inside the region and is not held."""

    object_id: str
    region: Region


@dataclass(frozen=True)
class RemoveFromRegion:
    """Success once the object is anywhere outside the region."""

    object_id: str
    region: Region


@dataclass(frozen=True)
class WipeContacts:
    """Success once the held wipe object has passed near enough targets.

    A target counts as contacted on any step where the wipe object is
    held and within ``contact_radius`` of it; one sweep may collect
    several targets.
    """

    wipe_object: str
    targets: tuple[str, ...]
    contact_radius: float = 0.12
    required_count: int | None = None

    def needed(self) -> int:
        return len(self.targets) if self.required_count is None else self.required_count


SuccessCondition = Union[PlaceInRegion, RemoveFromRegion, WipeContacts]


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    objects: tuple[ScenarioObject, ...]
    regions: tuple[Region, ...]
    success: SuccessCondition
    time_limit_s: float = DEFAULT_TIME_LIMIT_S
    start_state: RobotState = field(default_factory=RobotState)

    def world_objects(self) -> list[WorldObject]:
        return [WorldObject(o.object_id, o.pose, o.attachable)
                for o in self.objects]


@dataclass
class TaskProgress:
    """Mutable per-run progress; only the wipe predicate needs history."""

    contacted: set[str] = field(default_factory=set)

    def reset(self) -> None:
        self.contacted.clear()


def update_progress(progress: TaskProgress, scenario: Scenario,
                    robot: RobotState, objects: Mapping[str, Pose3]) -> None:
    """Accumulate wipe contacts for the current step."""
    success = scenario.success
    if not isinstance(success, WipeContacts):
        return
    if robot.held_object != success.wipe_object:
        return
    wipe_pose = objects.get(success.wipe_object)
    if wipe_pose is None:
        return
    for target in success.targets:
        if target in progress.contacted:
            continue
        target_pose = objects.get(target)
        if target_pose is not None and wipe_pose.distance_to(target_pose) <= success.contact_radius:
            progress.contacted.add(target)


def check_success(scenario: Scenario, robot: RobotState,
                  objects: Mapping[str, Pose3],
                  progress: TaskProgress | None = None) -> bool:
    """Evaluate the scenario's success predicate against the current world."""
    success = scenario.success
    if isinstance(success, PlaceInRegion):
        pose = objects.get(success.object_id)
        return (pose is not None and success.region.contains(pose)
                and robot.held_object != success.object_id)
    if isinstance(success, RemoveFromRegion):
        pose = objects.get(success.object_id)
        return pose is not None and not success.region.contains(pose)
    if progress is None:
        return False
    done = sum(1 for t in success.targets if t in progress.contacted)
    return done >= success.needed()


# --- bundled scenarios -----------------------------------------------------
#
# Geometry is authored around the homed start pose (base at the origin
# facing +x, end effector 0.2 m to the robot's right at lift height 0.5).


def _box(name: str, lo: tuple[float, float, float],
         hi: tuple[float, float, float]) -> Region:
    return Region(name, Pose3(*lo), Pose3(*hi))


def _cup() -> Scenario:
    target = _box("target", (2.8, -0.55, 0.5), (3.2, -0.15, 0.9))
    return Scenario(
        scenario_id="cup",
        objects=(ScenarioObject("cup", Pose3(1.5, -0.35, 0.75), attachable=True),),
        regions=(target,),
        success=PlaceInRegion("cup", target),
    )


def _trash() -> Scenario:
    bin_region = _box("bin", (2.2, -0.65, 0.0), (2.6, -0.25, 0.55))
    return Scenario(
        scenario_id="trash",
        objects=(ScenarioObject("trash", Pose3(0.9, -0.45, 0.0), attachable=True),),
        regions=(bin_region,),
        success=PlaceInRegion("trash", bin_region),
    )


def _blanket() -> Scenario:
    legs = _box("legs", (0.3, -0.2, 0.3), (0.7, 0.25, 0.8))
    return Scenario(
        scenario_id="blanket",
        objects=(ScenarioObject("blanket", Pose3(0.4998, 0.0146, 0.55),
                                attachable=True),),
        regions=(legs,),
        success=RemoveFromRegion("blanket", legs),
    )


def _cleaning() -> Scenario:
    leg = _box("leg", (1.1, -0.62, 0.45), (1.6, -0.38, 0.75))
    return Scenario(
        scenario_id="cleaning",
        objects=(
            ScenarioObject("towel", Pose3(0.6, -0.5, 0.6), attachable=True),
            ScenarioObject("tape1", Pose3(1.2, -0.5, 0.6)),
            ScenarioObject("tape2", Pose3(1.35, -0.5, 0.6)),
            ScenarioObject("tape3", Pose3(1.5, -0.5, 0.6)),
        ),
        regions=(leg,),
        success=WipeContacts("towel", ("tape1", "tape2", "tape3"),
                             contact_radius=0.12),
    )


def _practice() -> Scenario:
    counter = _box("counter", (0.6, -0.6, 0.65), (1.2, -0.1, 0.85))
    return Scenario(
        scenario_id="practice",
        objects=(ScenarioObject("block", Pose3(0.9, -0.35, 0.75),
                                attachable=True),),
        regions=(counter,),
        success=RemoveFromRegion("block", counter),
    )


BUNDLED_SCENARIOS = {
    "cup": _cup,
    "trash": _trash,
    "blanket": _blanket,
    "cleaning": _cleaning,
    "practice": _practice,
}


def load_scenario(source: str | Path) -> Scenario:
    """Load a scenario by bundled id or from a scenario file path."""
    key = str(source)
    builder = BUNDLED_SCENARIOS.get(key.lower())
    if builder is not None:
        return builder()
    path = Path(source)
    if not path.exists():
        raise MalformedScenario(
            f"{source!r} is neither a bundled scenario id "
            f"({', '.join(sorted(BUNDLED_SCENARIOS))}) nor a readable file")
    return parse_scenario(path.read_text(encoding="utf-8"), name=str(path))


def parse_scenario(text: str, name: str = "<scenario>") -> Scenario:
    """Parse the block-format scenario text; see data/scenarios/cup.scn."""
    doc = parse_blocks(text, MalformedScenario)
    scenario_id = doc.top.get("id")
    if not scenario_id:
        raise MalformedScenario(f"{name}: missing top-level 'id ='")
    time_limit = DEFAULT_TIME_LIMIT_S
    if "time_limit_s" in doc.top:
        time_limit = parse_float(doc.top["time_limit_s"],
                                 f"{name}: time_limit_s", MalformedScenario)
        if time_limit <= 0:
            raise MalformedScenario(f"{name}: time_limit_s must be positive")

    objects: dict[str, ScenarioObject] = {}
    regions: dict[str, Region] = {}
    success_block = None
    for block in doc.blocks:
        where = f"{name}: line {block.line_no}"
        kind = block.header[0]
        if kind == "object":
            if len(block.header) != 2 or not _NAME_RE.match(block.header[1]):
                raise MalformedScenario(f"{where}: expected [object <name>]")
            obj_id = block.header[1]
            if obj_id in objects:
                raise MalformedScenario(f"{where}: duplicate object {obj_id!r}")
            if "pose" not in block.values:
                raise MalformedScenario(f"{where}: object needs 'pose = x y z'")
            pose = Pose3(*parse_floats(block.values["pose"], 3,
                                       f"{where}: pose", MalformedScenario))
            attachable = parse_bool(block.values.get("attachable", "false"),
                                    f"{where}: attachable", MalformedScenario)
            objects[obj_id] = ScenarioObject(obj_id, pose, attachable)
        elif kind == "region":
            if len(block.header) != 2 or not _NAME_RE.match(block.header[1]):
                raise MalformedScenario(f"{where}: expected [region <name>]")
            region_name = block.header[1]
            if region_name in regions:
                raise MalformedScenario(f"{where}: duplicate region {region_name!r}")
            for corner in ("min", "max"):
                if corner not in block.values:
                    raise MalformedScenario(f"{where}: region needs '{corner} = x y z'")
            lo = parse_floats(block.values["min"], 3, f"{where}: min",
                              MalformedScenario)
            hi = parse_floats(block.values["max"], 3, f"{where}: max",
                              MalformedScenario)
            try:
                regions[region_name] = Region(region_name, Pose3(*lo), Pose3(*hi))
            except ValueError as err:
                raise MalformedScenario(f"{where}: {err}") from None
        elif kind == "success":
            if success_block is not None:
                raise MalformedScenario(f"{where}: duplicate [success] block")
            success_block = block
        else:
            raise MalformedScenario(f"{where}: unknown section {kind!r}")

    if success_block is None:
        raise MalformedScenario(f"{name}: missing [success] block")
    success = _parse_success(success_block, objects, regions, name)
    return Scenario(scenario_id, tuple(objects.values()),
                    tuple(regions.values()), success, time_limit)


def _parse_success(block, objects, regions, name: str) -> SuccessCondition:
    where = f"{name}: line {block.line_no}"
    kind = block.values.get("kind")
    if kind in ("place_in_region", "remove_from_region"):
        obj_id = block.values.get("object")
        region_name = block.values.get("region")
        if obj_id not in objects:
            raise MalformedScenario(f"{where}: success references unknown object {obj_id!r}")
        if region_name not in regions:
            raise MalformedScenario(f"{where}: success references unknown region {region_name!r}")
        cls = PlaceInRegion if kind == "place_in_region" else RemoveFromRegion
        return cls(obj_id, regions[region_name])
    if kind == "wipe_contacts":
        wipe = block.values.get("wipe")
        if wipe not in objects:
            raise MalformedScenario(f"{where}: success references unknown wipe object {wipe!r}")
        targets = tuple(block.values.get("targets", "").split())
        if not targets:
            raise MalformedScenario(f"{where}: wipe_contacts needs 'targets = id id ...'")
        for target in targets:
            if target not in objects:
                raise MalformedScenario(f"{where}: unknown wipe target {target!r}")
        radius = parse_float(block.values.get("contact_radius", "0.12"),
                             f"{where}: contact_radius", MalformedScenario)
        required = None
        if "required" in block.values:
            required = int(parse_float(block.values["required"],
                                       f"{where}: required", MalformedScenario))
            if not 0 < required <= len(targets):
                raise MalformedScenario(f"{where}: required must be in 1..{len(targets)}")
        return WipeContacts(wipe, targets, radius, required)
    raise MalformedScenario(
        f"{where}: success kind must be place_in_region, remove_from_region, "
        f"or wipe_contacts, got {kind!r}")
