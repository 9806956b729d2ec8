//! Command-line front end: argument definitions, file formats and manifests.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use condorcet::oracle::cross_check;
use condorcet::{
    domain_size, expand, partition, resume, ConditionAssignment, NeverCondition,
    RuleSet, SearchConfig, SearchStats, SizeHistogram,
};
use sha2::{Digest, Sha256};

/// Exit status when `check` finds a difference between generator and oracle.
pub const EXIT_MISMATCH: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "cdgen", version, about = "Isomorph-free generation of Condorcet domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one representative per isomorphism class.
    Generate(GenerateArgs),
    /// Expand code strings into full domains.
    Expand(IoArgs),
    /// Compare the generator with the brute-force oracle.
    Check(CheckArgs),
    /// Size histogram of the domains in a conditions file.
    Stats(IoArgs),
    /// List the search nodes at a given depth, for partitioned runs.
    Partition(PartitionArgs),
    /// Recompute the checksum recorded in a manifest.
    VerifyManifest {
        manifest: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Number of alternatives.
    #[arg(long)]
    pub n: usize,
    /// Allowed never conditions, e.g. 2N3,2N1.
    #[arg(long, value_parser = parse_rules)]
    pub rules: RuleSet,
    /// Keep every complete assignment, not only those with copious domains.
    #[arg(long)]
    pub all_domains: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig::new(self.n, self.rules).copious_only(!self.all_domains)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One code string per line.
    Conditions,
    /// Every full domain, one order per line.
    Orders,
    /// `size: count` lines in ascending size.
    Histogram,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Conditions)]
    pub format: Format,
    /// Drop leaves whose domain is not maximal.
    #[arg(long)]
    pub maximal_only: bool,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Only search below this code string (as printed by `partition`).
    #[arg(long)]
    pub prefix: Option<String>,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Conditions file as written by `generate`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Copious,
    All,
    Both,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_rules)]
    pub rules: RuleSet,
    #[arg(long, value_enum, default_value_t = CheckMode::Both)]
    pub mode: CheckMode,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Number of assigned triples in each listed node.
    #[arg(long)]
    pub depth: usize,
    #[arg(long)]
    pub prefix: Option<String>,
}

fn parse_rules(s: &str) -> std::result::Result<RuleSet, String> {
    s.parse().map_err(|e: condorcet::Error| e.to_string())
}

/// Runs a parsed command. Returns the process exit status.
pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Generate(args) => run_generate(&args),
        Command::Expand(args) => run_expand(&args),
        Command::Check(args) => run_check(&args),
        Command::Stats(args) => run_stats(&args),
        Command::Partition(args) => run_partition(&args),
        Command::VerifyManifest { manifest } => {
            let m = Manifest::read(&manifest)?;
            m.verify(&manifest)?;
            println!("ok {}", manifest.display());
            Ok(0)
        }
    }
}

/// First line of a conditions file.
pub fn conditions_header(n: usize, rules: RuleSet) -> String {
    let codes: Vec<String> = NeverCondition::ALL
        .iter()
        .map(|c| format!("{c}:{}", c.code()))
        .collect();
    format!("# n={n} rules={} order=colex codes={}", rules.tokens(), codes.join(","))
}

/// Reads code strings, skipping blank and `#` lines. The header's `n`, if
/// present, is used to decode; otherwise `n` is inferred from the length.
pub fn read_conditions<R: BufRead>(input: R) -> Result<Vec<ConditionAssignment>> {
    let mut n = None;
    let mut out = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if let Some(header) = line.strip_prefix('#') {
            for field in header.split_whitespace() {
                if let Some(v) = field.strip_prefix("n=") {
                    n = Some(v.parse::<usize>().with_context(|| format!("bad header field '{field}'"))?);
                }
            }
        } else if !line.is_empty() {
            let leaf = match n {
                Some(n) => ConditionAssignment::decode_with_n(line, n),
                None => ConditionAssignment::decode(line),
            }
            .with_context(|| format!("line {}", k + 1))?;
            out.push(leaf);
        }
    }
    Ok(out)
}

fn open_input(path: &Path) -> Result<Vec<ConditionAssignment>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_conditions(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot write {}", p.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn histogram_of<'a>(leaves: impl IntoIterator<Item = &'a ConditionAssignment>) -> Result<SizeHistogram> {
    let mut h = SizeHistogram::new();
    for leaf in leaves {
        h.add(domain_size(leaf)?);
    }
    Ok(h)
}

fn run_generate(args: &GenerateArgs) -> Result<u8> {
    let cfg = args
        .search
        .config()
        .maximal_only(args.maximal_only)
        .threads(args.threads);
    let prefix = match &args.prefix {
        Some(p) => ConditionAssignment::decode_with_n(p, cfg.n)?,
        None => ConditionAssignment::empty(cfg.n)?,
    };
    let mut out = open_output(args.out.as_deref())?;
    let flush_each = cfg.threads == 1;
    let mut histogram = SizeHistogram::new();

    if args.format == Format::Conditions {
        writeln!(out, "{}", conditions_header(cfg.n, cfg.rules))?;
    }
    let stats = {
        let format = args.format;
        let mut sink = |leaf: &ConditionAssignment| -> io::Result<()> {
            match format {
                Format::Conditions => writeln!(out, "{leaf}")?,
                Format::Orders => {
                    let d = expand(leaf).map_err(io::Error::other)?;
                    d.write_to(&mut out, Some(leaf))?;
                }
                Format::Histogram => {
                    histogram.add(domain_size(leaf).map_err(io::Error::other)?);
                    return Ok(());
                }
            }
            if flush_each {
                out.flush()?;
            }
            Ok(())
        };
        resume(&cfg, &prefix, &mut sink)?
    };
    if args.format == Format::Histogram {
        write!(out, "{histogram}")?;
    }
    out.flush()?;
    drop(out);

    eprintln!(
        "{} classes, {} nodes visited, {} pruned, {:.3} s",
        stats.leaves_emitted,
        stats.nodes_visited,
        stats.nodes_pruned,
        stats.wall_time.as_secs_f64()
    );
    if let Some(path) = &args.out {
        let mut m = Manifest::new("generate", path)?;
        m.push("n", cfg.n);
        m.push("rules", cfg.rules.tokens());
        m.push("format", format!("{:?}", args.format).to_lowercase());
        m.push("copious_only", cfg.copious_only);
        m.push("maximal_only", cfg.maximal_only);
        m.push("threads", cfg.threads);
        m.push("prefix", prefix.encode());
        push_stats(&mut m, &stats);
        m.write_beside(path)?;
    }
    Ok(0)
}

fn push_stats(m: &mut Manifest, stats: &SearchStats) {
    m.push("classes", stats.leaves_emitted);
    m.push("nodes_visited", stats.nodes_visited);
    m.push("nodes_pruned", stats.nodes_pruned);
    m.push("leaves_rejected", stats.leaves_rejected);
    m.push("wall_time_ms", stats.wall_time.as_millis());
}

fn run_expand(args: &IoArgs) -> Result<u8> {
    let leaves = open_input(&args.input)?;
    let mut out = open_output(args.out.as_deref())?;
    for leaf in &leaves {
        let d = expand(leaf).with_context(|| format!("expanding {leaf}"))?;
        d.write_to(&mut out, Some(leaf))?;
    }
    out.flush()?;
    drop(out);
    if let Some(path) = &args.out {
        let mut m = Manifest::new("expand", path)?;
        m.push("input", args.input.display());
        m.push("domains", leaves.len());
        m.write_beside(path)?;
    }
    Ok(0)
}

fn run_stats(args: &IoArgs) -> Result<u8> {
    let leaves = open_input(&args.input)?;
    let histogram = histogram_of(&leaves)?;
    let mut out = open_output(args.out.as_deref())?;
    write!(out, "{histogram}")?;
    out.flush()?;
    drop(out);
    if let Some(path) = &args.out {
        let mut m = Manifest::new("stats", path)?;
        m.push("input", args.input.display());
        m.push("classes", histogram.total());
        m.write_beside(path)?;
    }
    Ok(0)
}

fn run_check(args: &CheckArgs) -> Result<u8> {
    let modes: &[bool] = match args.mode {
        CheckMode::Copious => &[true],
        CheckMode::All => &[false],
        CheckMode::Both => &[true, false],
    };
    let mut status = 0;
    for &copious in modes {
        let report = cross_check(args.n, args.rules, copious)?;
        let label = if copious { "copious" } else { "all" };
        let verdict = if report.is_equal() { "equal" } else { "DIFFERENT" };
        println!(
            "n={} rules={} domains={label}: {verdict} (oracle {}, generated {})",
            args.n,
            args.rules.tokens(),
            report.oracle_classes,
            report.generated
        );
        for (name, list) in [
            ("duplicate", &report.duplicates),
            ("missing", &report.missing),
            ("unexpected", &report.unexpected),
        ] {
            for code in list {
                println!("  {name} {code}");
            }
        }
        if !report.is_equal() {
            status = EXIT_MISMATCH;
        }
    }
    Ok(status)
}

fn run_partition(args: &PartitionArgs) -> Result<u8> {
    let cfg = args.search.config();
    let prefix = match &args.prefix {
        Some(p) => ConditionAssignment::decode_with_n(p, cfg.n)?,
        None => ConditionAssignment::empty(cfg.n)?,
    };
    let mut out = io::stdout().lock();
    for node in partition(&cfg, &prefix, args.depth)? {
        writeln!(out, "{node}")?;
    }
    Ok(0)
}

/// `key=value` record written next to an output file as `<output>.manifest`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    fn new(command: &str, output: &Path) -> Result<Self> {
        let mut m = Manifest::default();
        m.push("tool", concat!("cdgen ", env!("CARGO_PKG_VERSION")));
        m.push("command", command);
        m.push(
            "output",
            output.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()),
        );
        m.push("sha256", sha256_file(output)?);
        Ok(m)
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest");
        output.with_file_name(name)
    }

    fn write_beside(&self, output: &Path) -> Result<()> {
        let path = Self::path_for(output);
        let mut text = String::new();
        for (k, v) in &self.entries {
            writeln!(text, "{k}={v}").expect("writing to a string");
        }
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mut m = Manifest::default();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let Some((k, v)) = line.split_once('=') else {
                bail!("malformed manifest line '{line}'");
            };
            m.push(k, v);
        }
        Ok(m)
    }

    /// Checks the recorded checksum against the output file next to `manifest`.
    pub fn verify(&self, manifest: &Path) -> Result<()> {
        let output = self.get("output").context("manifest has no output entry")?;
        let expected = self.get("sha256").context("manifest has no sha256 entry")?;
        let path = manifest.with_file_name(output);
        let actual = sha256_file(&path)?;
        if actual != expected {
            bail!("checksum mismatch for {}: expected {expected}, found {actual}", path.display());
        }
        Ok(())
    }
}

fn sha256_file(path: &Path) -> Result<String> {
    let mut file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut hasher = Sha256::new();
    io::copy(&mut file, &mut hasher)?;
    Ok(format!("{:x}", hasher.finalize()))
}
