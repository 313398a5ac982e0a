//! Benchmark fixtures: named systems at sizes that finish in well under a second.

use coxbuild_core::building::RegularBuildingSpec;
use coxbuild_core::coxeter::systems;
use coxbuild_core::CoxeterMatrix;

/// Systems covering the affine, hyperbolic and higher-rank right-angled cases.
pub fn named_systems() -> Vec<(&'static str, CoxeterMatrix)> {
    vec![
        ("affine_a2", systems::triangle(3, 3, 3)),
        ("triangle_732", systems::triangle(7, 3, 2)),
        ("pentagon", systems::pentagon()),
        ("right_angled_heptagon", systems::right_angled_polygon(7)),
    ]
}

/// The thickness-2 right-angled pentagon building.
pub fn pentagon_building() -> RegularBuildingSpec {
    RegularBuildingSpec::uniform(systems::pentagon(), 2).expect("pentagon thickness is class constant")
}
