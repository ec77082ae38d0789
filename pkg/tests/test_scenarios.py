from pathlib import Path

import pytest

from headteleop.robot import Pose3, RobotState
from headteleop.scenarios import (BUNDLED_SCENARIOS, MalformedScenario,
                                  PlaceInRegion, RemoveFromRegion,
                                  TaskProgress, WipeContacts, check_success,
                                  load_scenario, parse_scenario,
                                  update_progress)

DATA = Path(__file__).resolve().parents[1] / "src" / "headteleop" / "data"


def test_all_bundled_ids_load():
    for scenario_id in ("cup", "trash", "blanket", "cleaning", "practice"):
        scenario = load_scenario(scenario_id)
        assert scenario.scenario_id == scenario_id
        assert scenario.time_limit_s == 840.0


def test_cup_scenario_shape():
    cup = load_scenario("cup")
    assert len(cup.objects) == 1
    assert cup.objects[0].attachable
    assert isinstance(cup.success, PlaceInRegion)


def test_trash_starts_on_floor():
    trash = load_scenario("trash")
    assert trash.objects[0].pose.z == 0.0
    assert isinstance(trash.success, PlaceInRegion)
    assert trash.success.region.name == "bin"


def test_blanket_starts_inside_leg_region():
    blanket = load_scenario("blanket")
    assert isinstance(blanket.success, RemoveFromRegion)
    assert blanket.success.region.contains(blanket.objects[0].pose)


def test_cleaning_has_three_targets():
    cleaning = load_scenario("cleaning")
    assert isinstance(cleaning.success, WipeContacts)
    assert len(cleaning.success.targets) == 3
    assert cleaning.success.needed() == 3


def test_unknown_source_is_malformed():
    with pytest.raises(MalformedScenario):
        load_scenario("no_such_scenario")


def test_example_file_matches_bundled_cup():
    parsed = load_scenario(DATA / "scenarios" / "cup.scn")
    bundled = load_scenario("cup")
    assert parsed.scenario_id == bundled.scenario_id
    assert parsed.objects == bundled.objects
    assert parsed.success == bundled.success


MINIMAL = """
id = test
[object ball]
pose = 1 0 0.5
attachable = true
[region goal]
min = 2 -1 0
max = 3 1 1
[success]
kind = place_in_region
object = ball
region = goal
"""


def test_parse_minimal_scenario():
    scenario = parse_scenario(MINIMAL)
    assert scenario.scenario_id == "test"
    assert scenario.objects[0].object_id == "ball"
    assert scenario.regions[0].name == "goal"


@pytest.mark.parametrize("mutation,needle", [
    (lambda t: t.replace("[region goal]\nmin = 2 -1 0\nmax = 3 1 1\n", ""),
     "unknown region"),
    (lambda t: t.replace("region = goal", "region = nowhere"), "unknown region"),
    (lambda t: t.replace("object = ball", "object = ghost"), "unknown object"),
    (lambda t: t.replace("pose = 1 0 0.5", "pose = 1 0"), "expected 3 numbers"),
    (lambda t: t.replace("kind = place_in_region", "kind = levitate"), "kind"),
    (lambda t: t.replace("id = test", ""), "missing top-level"),
    (lambda t: t.replace("min = 2 -1 0", "min = 4 -1 0"), "degenerate"),
    (lambda t: t + "\n[success]\nkind = place_in_region\n", "duplicate"),
])
def test_malformed_scenarios_report_location(mutation, needle):
    with pytest.raises(MalformedScenario) as err:
        parse_scenario(mutation(MINIMAL))
    assert needle in str(err.value)


# --- predicates ---------------------------------------------------------------

def test_place_requires_release():
    cup = load_scenario("cup")
    center = Pose3(3.0, -0.35, 0.7)
    inside = {"cup": center}
    held = RobotState(held_object="cup")
    free = RobotState()
    assert check_success(cup, free, inside)
    assert not check_success(cup, held, inside)
    assert not check_success(cup, free, {"cup": Pose3(0.0, 0.0, 0.0)})


def test_remove_from_region():
    blanket = load_scenario("blanket")
    start = {"blanket": blanket.objects[0].pose}
    moved = {"blanket": Pose3(0.5, 1.3, 0.6)}
    assert not check_success(blanket, RobotState(), start)
    assert check_success(blanket, RobotState(held_object="blanket"), moved)


def test_wipe_contacts_accumulate_only_while_held():
    cleaning = load_scenario("cleaning")
    progress = TaskProgress()
    poses = {o.object_id: o.pose for o in cleaning.objects}
    not_holding = RobotState()
    holding = RobotState(held_object="towel")

    poses["towel"] = Pose3(1.2, -0.5, 0.6)  # on tape1
    update_progress(progress, cleaning, not_holding, poses)
    assert progress.contacted == set()

    update_progress(progress, cleaning, holding, poses)
    assert progress.contacted == {"tape1"}
    assert not check_success(cleaning, holding, poses, progress)

    poses["towel"] = Pose3(1.42, -0.5, 0.6)  # within radius of tape2 and tape3
    update_progress(progress, cleaning, holding, poses)
    assert progress.contacted == {"tape1", "tape2", "tape3"}
    assert check_success(cleaning, holding, poses, progress)

    progress.reset()
    assert not check_success(cleaning, holding, poses, progress)
