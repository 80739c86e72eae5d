//! The single input-file schema shared by all subcommands; each command
//! demands the fields it needs.

use fellkms_core::angle::UnitCircleValue;
use fellkms_core::interchange::{GroupoidDto, KCocycleDto, KGraphDto};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDto {
    pub groupoid: Option<GroupoidDto>,
    /// `[[α, β, "p/q"], ...]` over all composable pairs.
    pub two_cocycle: Option<Vec<(i64, i64, UnitCircleValue)>>,
    /// `[[arrow, value], ...]` over all arrows.
    pub one_cocycle: Option<Vec<(i64, f64)>>,
    pub beta: Option<f64>,
    /// `[[arrow, re, im], ...]`
    pub functional: Option<Vec<(i64, f64, f64)>>,
    pub rank: Option<usize>,
    /// `[["p/q", ...], ...]` strictly lower triangular.
    pub theta: Option<Vec<Vec<UnitCircleValue>>>,
    pub kgraph: Option<KGraphDto>,
    pub cocycle: Option<KCocycleDto>,
}
