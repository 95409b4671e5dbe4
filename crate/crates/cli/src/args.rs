use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orderlab::GroupId;

#[derive(Parser, Debug)]
#[command(name = "orderlab", version, about = "Ordered-group verification, entropy and pair experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the past axioms and the admissibility of the standard semigroup.
    Verify(VerifyArgs),
    /// Translation defects of the standard box sequence.
    Folner(FolnerArgs),
    /// Topological or measure entropy estimates, with an optional Pinsker check.
    Entropy(EntropyArgs),
    /// Asymptotic, stable-set and Li-Yorke pair experiments on full shifts.
    #[command(subcommand)]
    Pairs(PairsCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    Zd,
    Heisenberg,
    Unipotent,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    #[arg(long, value_enum, default_value = "zd")]
    pub group: GroupKind,
    /// Rank of ℤ^d, or the level count of the unipotent group.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
}

impl GroupArgs {
    pub fn resolve(&self) -> Result<GroupId, String> {
        let id = match self.group {
            GroupKind::Zd => GroupId::lattice(self.d),
            GroupKind::Heisenberg => Ok(GroupId::Heisenberg),
            GroupKind::Unipotent => GroupId::unipotent(self.d),
        };
        id.map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 2)]
    pub radius: u64,
    #[arg(long, default_value_t = 3)]
    pub nmax: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FolnerArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Translator: coordinates such as `1,0`, a generator name, or `id`.
    #[arg(long)]
    pub g: String,
    /// Inclusive range of box parameters, `a:b`.
    #[arg(long, default_value = "1:10")]
    pub range: String,
    #[arg(long, default_value_t = orderlab::folner::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Subshift of finite type description file.
    #[arg(long, conflicts_with_all = ["full", "measure"])]
    pub sft: Option<PathBuf>,
    /// Use the full shift on `--alphabet` symbols.
    #[arg(long, conflicts_with = "measure")]
    pub full: bool,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    /// Shift-invariant measure JSON file.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Largest box parameter.
    #[arg(long)]
    pub n: Option<u64>,
    /// Check the Pinsker identity at truncation `--radius`.
    #[arg(long, requires = "measure")]
    pub pinsker: bool,
    #[arg(long, default_value_t = 3)]
    pub radius: u64,
    /// Partition coordinates, `;`-separated cells.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum PairsCommand {
    /// Li-Yorke pair over a sparse diagonal difference set (ℤ^d only).
    Liyorke(LiYorkeArgs),
    /// Finite-difference pair checked against the semigroup up to a horizon.
    Asymptotic(AsymptoticArgs),
    /// Random finite perturbations that stay asymptotic.
    Stable(StableArgs),
    /// Pairwise Li-Yorke sample built from interleaved difference sets.
    Chaotic(ChaoticArgs),
}

#[derive(Args, Debug)]
pub struct LiYorkeArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    /// Exponent of the first difference point.
    #[arg(long, default_value_t = 3)]
    pub k0: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AsymptoticArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    /// Difference cells, `;`-separated (`5,5;1,2`), or `none`.
    #[arg(long, default_value = "none")]
    pub diff: String,
    #[arg(long, default_value_t = 10)]
    pub horizon: u64,
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct StableArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 6)]
    pub horizon: u64,
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub epsilon: f64,
    /// Number of perturbations to collect.
    #[arg(long, default_value_t = 8)]
    pub budget: usize,
    #[arg(long, default_value_t = 3)]
    pub max_cells: usize,
    #[arg(long, default_value_t = 2)]
    pub cell_radius: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ChaoticArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 4)]
    pub members: usize,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    #[arg(long, default_value_t = 2)]
    pub k0: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
