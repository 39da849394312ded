//! Small bundled planning tasks used by tests, examples and the CLI.

use crate::pddl::{ground, parse_domain, parse_problem, Domain, GroundTask, PddlError, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bundled {
    pub name: &'static str,
    pub domain: &'static str,
    pub problem: &'static str,
}

pub const BLOCKSWORLD_4: Bundled = Bundled {
    name: "blocksworld-4",
    domain: include_str!("../data/blocksworld.pddl"),
    problem: include_str!("../data/blocksworld-4.pddl"),
};

pub const LOGISTICS_3: Bundled = Bundled {
    name: "logistics-3",
    domain: include_str!("../data/logistics.pddl"),
    problem: include_str!("../data/logistics-3.pddl"),
};

pub const GRIPPER_2: Bundled = Bundled {
    name: "gripper-2",
    domain: include_str!("../data/gripper.pddl"),
    problem: include_str!("../data/gripper-2.pddl"),
};

pub const ROVER_1: Bundled = Bundled {
    name: "rover-1",
    domain: include_str!("../data/rover.pddl"),
    problem: include_str!("../data/rover-1.pddl"),
};

pub const ALL: [Bundled; 4] = [BLOCKSWORLD_4, LOGISTICS_3, GRIPPER_2, ROVER_1];

impl Bundled {
    pub fn by_name(name: &str) -> Option<Bundled> {
        ALL.into_iter().find(|b| b.name == name)
    }

    pub fn parse(&self) -> Result<(Domain, Problem), PddlError> {
        let d = parse_domain(self.domain)?;
        let p = parse_problem(self.problem, &d)?;
        Ok((d, p))
    }

    pub fn task(&self) -> Result<GroundTask, PddlError> {
        let (d, p) = self.parse()?;
        ground(&d, &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_tasks_ground() {
        for b in ALL {
            let t = b.task().unwrap_or_else(|e| panic!("{}: {e}", b.name));
            assert!(!t.actions.is_empty(), "{}", b.name);
            assert!(!t.goal.is_empty(), "{}", b.name);
        }
    }

    #[test]
    fn rover_communicate_soil_has_four_parameters() {
        let (d, _) = ROVER_1.parse().unwrap();
        let a = d.action("communicate_soil_data").unwrap();
        assert_eq!(a.signature(), "communicate_soil_data waypoint lander rover waypoint");
    }
}
