//! Command-line front end. `run` maps an argument list to a report and an
//! exit status; the binary only prints.

use crate::coalg::{co_satisfies, hom_cov};
use crate::error::{Error, Result};
use crate::filtration::{
    canonical_filtration, complete, is_iso_filtration, limit, profinite_filtration, ProjFilt,
};
use crate::finalg::{enumerate_homs, Algebra};
use crate::kernel::dsl::{self, Block};
use crate::kernel::{check_identity, SortedSet, Term};
use crate::limits::{self, Limits};
use crate::report::{Check, ErrorRecord, Report, EXIT_USAGE};
use crate::suite;
use crate::tallwraith::{
    kunneth_check, operations_monoid, tw_algebra_module_check, tw_module_check, tw_monoid_check,
    twprod,
};
use crate::variety::{coproduct, finitely_presented, hom_algebra_contra, impose_identities, Presentation};
use crate::workspace::Workspace;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "twalg", version, about = "Finite universal algebra and composition products of co-algebra objects")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Ceiling on table cells of any constructed algebra.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_cells: u64,
    /// Ceiling on enumerated assignments, maps or search nodes.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_enum: u64,
    /// Extra DSL files loaded after the fixture bundle.
    #[arg(short = 'f', long = "file", global = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Load and resolve DSL files, printing what they define.
    Check {
        paths: Vec<PathBuf>,
    },
    /// Free algebra on a sorted generator set.
    Free {
        #[arg(short = 'v', long)]
        variety: String,
        /// Generators as `name:sort, ...`.
        #[arg(short = 'g', long, default_value = "")]
        gens: String,
        /// Print the operation tables.
        #[arg(long)]
        tables: bool,
    },
    /// Finitely presented algebra.
    Present {
        #[arg(short = 'v', long)]
        variety: String,
        #[arg(short = 'g', long, default_value = "")]
        gens: String,
        /// Relations `lhs = rhs`, separated by `;`.
        #[arg(short = 'r', long, default_value = "")]
        relations: String,
        #[arg(long)]
        tables: bool,
    },
    /// Coproduct of algebras of a variety.
    Coproduct {
        #[arg(short = 'v', long)]
        variety: String,
        /// Summands, comma separated.
        #[arg(short = 'a', long)]
        algebras: String,
    },
    /// Universal quotient of an algebra landing in a variety.
    Impose {
        #[arg(short = 'v', long)]
        variety: String,
        #[arg(short = 'a', long)]
        algebra: String,
        #[arg(long)]
        tables: bool,
    },
    /// Homomorphisms between two algebras.
    Hom {
        #[arg(short = 'a', long)]
        src: String,
        #[arg(short = 'b', long)]
        dst: String,
        /// List every homomorphism.
        #[arg(long)]
        list: bool,
    },
    /// Hom-set with lifted structure: `Hom(X, A)` for an algebra object, or
    /// `Hom(B, X)` for a co-object.
    Homalg {
        #[arg(short = 'v', long)]
        variety: Option<String>,
        /// Algebra of the variety, used as an algebra object in sets.
        #[arg(short = 'A', long)]
        algebra: Option<String>,
        /// Co-object for the covariant lift.
        #[arg(short = 'c', long)]
        coalgebra: Option<String>,
        #[arg(short = 'x', long)]
        x: String,
    },
    /// Co-identities of a co-object.
    Cosat {
        #[arg(short = 'c', long)]
        coalgebra: String,
    },
    /// Composition product of two co-objects.
    Twprod {
        left: String,
        right: String,
    },
    /// Monoid laws of a named monoid.
    TwCheck {
        #[arg(short = 'm', long)]
        monoid: String,
    },
    /// Module laws of a named module.
    ModuleCheck {
        #[arg(short = 'M', long)]
        module: String,
    },
    /// Operations monoid of an algebra in sets and its action on hom-sets.
    OpsMonoid {
        #[arg(short = 'v', long)]
        variety: String,
        #[arg(short = 'A', long)]
        algebra: String,
    },
    /// Künneth condition for a list of sorts.
    Kunneth {
        #[arg(short = 'v', long)]
        variety: String,
        #[arg(short = 'A', long)]
        algebra: String,
        /// Sorts, comma separated.
        #[arg(short = 'I', long, default_value = "")]
        sorts: String,
    },
    /// Filtration operations.
    Filt {
        #[command(subcommand)]
        cmd: FiltCmd,
    },
    /// Fixture-wide checks.
    Suite {
        /// `all` or one of the groups.
        #[arg(long, default_value = "all")]
        fixtures: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FiltCmd {
    Reduce { name: String },
    Limit { name: String },
    Complete { name: String },
    Canonical { name: String },
    Profinite {
        #[arg(short = 'a', long)]
        algebra: String,
        #[arg(short = 'k', long)]
        bound: usize,
    },
    Check { name: String },
}

/// A finished invocation: the report, its rendering, and where to print it.
pub struct Outcome {
    pub report: Report,
    pub text: String,
    pub to_stderr: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let command = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let mut report = Report::new(&command, Ok(vec![]), Default::default());
            let to_stderr = e.use_stderr();
            if to_stderr {
                report.status = "usage".into();
                report.exit = EXIT_USAGE;
                report.error = Some(ErrorRecord { kind: "usage".into(), message: e.kind().to_string() });
            }
            return Outcome { report, text: e.render().to_string(), to_stderr };
        }
    };
    let report = execute(&cli, &command);
    let text = if cli.global.json { report.to_json() + "\n" } else { report.to_text() };
    Outcome { report, text, to_stderr: false }
}

pub fn execute(cli: &Cli, command: &str) -> Report {
    let lim = Limits { max_cells: cli.global.max_cells, max_enum: cli.global.max_enum, ..Limits::default() };
    limits::with_limits(lim, || {
        limits::reset_usage();
        let outcome = load(&cli.global.files, &cli.cmd).and_then(|ws| dispatch(&ws, &cli.cmd));
        Report::new(command, outcome, limits::usage())
    })
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load(files: &[PathBuf], cmd: &Cmd) -> Result<Workspace> {
    let mut texts = files.iter().map(read).collect::<Result<Vec<_>>>()?;
    if let Cmd::Check { paths } = cmd {
        for f in paths {
            texts.push(read(f)?);
        }
    }
    Workspace::with_files(&texts)
}

fn dispatch(ws: &Workspace, cmd: &Cmd) -> Result<Vec<Check>> {
    match cmd {
        Cmd::Check { .. } => check(ws),
        Cmd::Free { variety, gens, tables } => free(ws, variety, gens, *tables),
        Cmd::Present { variety, gens, relations, tables } => present(ws, variety, gens, relations, *tables),
        Cmd::Coproduct { variety, algebras } => coprod(ws, variety, algebras),
        Cmd::Impose { variety, algebra, tables } => impose(ws, variety, algebra, *tables),
        Cmd::Hom { src, dst, list } => hom(ws, src, dst, *list),
        Cmd::Homalg { variety, algebra, coalgebra, x } => homalg(ws, variety, algebra, coalgebra, x),
        Cmd::Cosat { coalgebra } => cosat(ws, coalgebra),
        Cmd::Twprod { left, right } => tw_product(ws, left, right),
        Cmd::TwCheck { monoid } => Ok(Check::from_certification(&tw_monoid_check(&*ws.monoid(monoid)?)?)),
        Cmd::ModuleCheck { module } => {
            let md = ws.module(module)?;
            let m = ws.monoid(&md.monoid)?;
            Ok(Check::from_certification(&tw_module_check(&m, &md.tm, &md.rho)?))
        }
        Cmd::OpsMonoid { variety, algebra } => ops_monoid(ws, variety, algebra),
        Cmd::Kunneth { variety, algebra, sorts } => kunneth(ws, variety, algebra, sorts),
        Cmd::Filt { cmd } => filt(ws, cmd),
        Cmd::Suite { fixtures } => suite::run(ws, fixtures),
    }
}

fn describe(c: Check, a: &Algebra, tables: bool) -> Check {
    let mut c = c;
    for (s, name) in a.sig.sorts.iter().enumerate() {
        c = c.count(&format!("size {name}"), a.size(s));
    }
    if tables {
        for line in a.describe().lines() {
            c = c.detail(line.to_string());
        }
    }
    c
}

fn check(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = vec![Check::pass("workspace resolves")
        .count("algebras", ws.algebras.len())
        .count("varieties", ws.varieties.len())
        .count("coalgebras", ws.coalgebras.len())
        .count("monoids", ws.monoids.len())
        .count("modules", ws.modules.len())
        .count("filtrations", ws.filtrations.len())];
    for v in ws.varieties.values() {
        let mut w = None;
        for g in &v.generators {
            if w.is_none() {
                w = v.violation(g)?.map(|x| format!("{}: {x}", g.name));
            }
        }
        out.push(Check::law(&format!("generators of {} satisfy its identities", v.name), w));
    }
    Ok(out)
}

fn free(ws: &Workspace, variety: &str, gens: &str, tables: bool) -> Result<Vec<Check>> {
    let v = ws.variety(variety)?;
    let x = SortedSet::parse(&v.sig, gens)?;
    let f = v.free(&x)?;
    let c = Check::info(&format!("free {} on {{{}}}", v.name, x.display(&v.sig))).count("size", f.algebra.total_size());
    Ok(vec![describe(c, &f.algebra, tables)])
}

/// Parses `lhs = rhs; ...` over the generator names.
fn relations(gens: &SortedSet, sig: &crate::kernel::Signature, text: &str) -> Result<Vec<(Term, Term)>> {
    let vars: Vec<String> = gens.entries.iter().map(|(n, s)| format!("{n}:{}", sig.sorts[*s])).collect();
    let mut out = Vec::new();
    for (k, rel) in text.split(';').map(str::trim).filter(|r| !r.is_empty()).enumerate() {
        let src = format!("identity rel{k} ({}) : {rel}", vars.join(", "));
        match dsl::parse(&src)?.pop() {
            Some(Block::Identity(id)) => {
                check_identity(sig, &id)?;
                out.push((id.lhs, id.rhs));
            }
            _ => return Err(Error::Invalid(format!("bad relation `{rel}`"))),
        }
    }
    Ok(out)
}

fn present(ws: &Workspace, variety: &str, gens: &str, rels: &str, tables: bool) -> Result<Vec<Check>> {
    let v = ws.variety(variety)?;
    let x = SortedSet::parse(&v.sig, gens)?;
    let relations = relations(&x, &v.sig, rels)?;
    let n = relations.len();
    let p = finitely_presented(&Presentation { variety: v.clone(), gens: x, relations })?;
    let c = Check::info(&format!("{} presented by {n} relations", v.name))
        .count("size", p.algebra.total_size())
        .count("free size", p.free.algebra.total_size());
    Ok(vec![describe(c, &p.algebra, tables)])
}

fn coprod(ws: &Workspace, variety: &str, algebras: &str) -> Result<Vec<Check>> {
    let v = ws.variety(variety)?;
    let summands = algebras.split(',').map(|n| ws.algebra(n.trim())).collect::<Result<Vec<_>>>()?;
    let c = coproduct(&v, &summands)?;
    let names: Vec<&str> = summands.iter().map(|a| a.name.as_str()).collect();
    Ok(vec![Check::info(&format!("coproduct {} in {}", names.join(" + "), v.name)).count("size", c.algebra.total_size())])
}

fn impose(ws: &Workspace, variety: &str, algebra: &str, tables: bool) -> Result<Vec<Check>> {
    let v = ws.variety(variety)?;
    let a = ws.algebra(algebra)?;
    let (ia, _) = impose_identities(&a, &v.identities)?;
    let c = Check::law(&format!("impose({}) lies in {}", a.name, v.name), v.violation(&ia)?).count("size", ia.total_size());
    Ok(vec![describe(c, &ia, tables)])
}

fn hom(ws: &Workspace, src: &str, dst: &str, list: bool) -> Result<Vec<Check>> {
    let (a, b) = (ws.algebra(src)?, ws.algebra(dst)?);
    let homs = enumerate_homs(&a, &b)?;
    let mut c = Check::info(&format!("Hom({}, {})", a.name, b.name)).count("homs", homs.len());
    if list {
        for h in &homs {
            c = c.detail(h.display());
        }
    }
    Ok(vec![c])
}

fn homalg(
    ws: &Workspace,
    variety: &Option<String>,
    algebra: &Option<String>,
    coalgebra: &Option<String>,
    x: &str,
) -> Result<Vec<Check>> {
    let x = ws.algebra(x)?;
    match (variety, algebra, coalgebra) {
        (Some(v), Some(a), None) => {
            let v = ws.variety(v)?;
            let a = ws.algebra(a)?;
            let h = hom_algebra_contra(&ws.algebra_object(&v, &a)?, &x)?;
            let c = Check::law(&format!("Hom({}, {}) lies in {}", x.name, a.name, v.name), v.violation(&h.algebra)?);
            Ok(vec![describe(c, &h.algebra, false)])
        }
        (None, None, Some(b)) => {
            let b = ws.coalgebra(b)?;
            let h = hom_cov(&b, &x)?;
            let c = Check::law(&format!("Hom({}, {}) lies in {}", b.name, x.name, b.v.name), b.v.violation(&h.algebra)?);
            Ok(vec![describe(c, &h.algebra, false)])
        }
        _ => Err(Error::Invalid("homalg needs either -v and -A, or -c".into())),
    }
}

fn cosat(ws: &Workspace, name: &str) -> Result<Vec<Check>> {
    let b = ws.coalgebra(name)?;
    let mut out = Vec::new();
    for id in &b.v.identities {
        out.push(Check::law(&format!("{} co-satisfies {}", b.name, id.source.name), co_satisfies(&b, id)?));
    }
    Ok(out)
}

fn tw_product(ws: &Workspace, left: &str, right: &str) -> Result<Vec<Check>> {
    let (b1, b2) = (ws.coalgebra(left)?, ws.coalgebra(right)?);
    let p = twprod(&b1, &b2)?;
    let mut out = Vec::new();
    for (i, c) in p.obj.components.iter().enumerate() {
        let sort = &b1.v.sig.sorts[i];
        out.push(describe(Check::info(&format!("({}*{})({sort})", b1.name, b2.name)), c, false));
    }
    out.push(Check::law(&format!("{}*{} co-operations intertwine", b1.name, b2.name), p.obj.validate().err().map(|e| e.to_string())));
    Ok(out)
}

fn ops_monoid(ws: &Workspace, variety: &str, algebra: &str) -> Result<Vec<Check>> {
    let v = ws.variety(variety)?;
    let aobj = ws.algebra_object(&v, &ws.algebra(algebra)?)?;
    let om = operations_monoid(&aobj)?;
    let mut out = vec![describe(Check::info(&format!("operations monoid of {}", aobj.name)), &om.monoid.t.components[0], false)];
    out.extend(Check::from_certification(&tw_monoid_check(&om.monoid)?));
    out.push(Check::law("mu is composition of operations", om.composition_violation()?));
    let sets = ws.sets()?;
    for x in suite::members(ws, &sets)? {
        let (m, hc, rho) = om.module_on(&x)?;
        out.extend(Check::from_certification(&tw_algebra_module_check(&om.monoid, &m.algebra, &hc, &rho)?));
    }
    Ok(out)
}

fn kunneth(ws: &Workspace, variety: &str, algebra: &str, sorts: &str) -> Result<Vec<Check>> {
    let v = ws.variety(variety)?;
    let aobj = ws.algebra_object(&v, &ws.algebra(algebra)?)?;
    let idx = sorts
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| v.sig.sort_index(s))
        .collect::<Result<Vec<_>>>()?;
    let k = kunneth_check(&aobj, &idx)?;
    let w = if k.passed() { None } else { Some(k.witness.clone().unwrap_or_else(|| "comparison is not bijective".into())) };
    Ok(vec![Check::law(&format!("Kunneth for {} on [{}]", aobj.name, k.sorts.join(", ")), w)
        .count("coproduct", k.coproduct_size)
        .count("product", k.product_size)])
}

fn stage_lines(c: Check, f: &ProjFilt) -> Check {
    let mut c = c.count("stages", f.stages.len()).count("generating", f.generating);
    for st in &f.stages {
        c = c.detail(format!("stage {}: {} -> {} ({} elements)", st.label, f.base.name, st.map.dst.name, st.map.dst.total_size()));
    }
    c
}

fn filt(ws: &Workspace, cmd: &FiltCmd) -> Result<Vec<Check>> {
    match cmd {
        FiltCmd::Reduce { name } => {
            let f = ws.filtration(name)?;
            let r = f.reduce()?;
            Ok(vec![stage_lines(Check::law(&format!("reduce({name}) is reduced"), (!r.filt.is_reduced()).then(|| "a stage is not onto".into())), &r.filt)])
        }
        FiltCmd::Limit { name } => {
            let f = ws.filtration(name)?;
            let l = limit(&f.reduce()?.filt)?;
            let c = Check::info(&format!("limit of {name}"))
                .count("size", l.algebra.total_size())
                .count("iota bijective", l.iota.is_bijective() as usize);
            Ok(vec![c])
        }
        FiltCmd::Complete { name } => {
            let f = ws.filtration(name)?;
            let c = complete(f)?;
            let iso = is_iso_filtration(&c.filt)?;
            Ok(vec![stage_lines(Check::expect(&format!("complete({name}) is an iso-filtration"), iso, || "canonical map is not bijective".into()), &c.filt)
                .count("size", c.filt.base.total_size())])
        }
        FiltCmd::Canonical { name } => {
            let f = ws.filtration(name)?;
            let o = canonical_filtration(&complete(f)?.filt)?;
            Ok(vec![Check::info(&format!("canonical filtration of complete({name})")).count("outer stages", o.stages.len())])
        }
        FiltCmd::Profinite { algebra, bound } => {
            let f = profinite_filtration(&ws.algebra(algebra)?, *bound)?;
            Ok(vec![stage_lines(Check::info(&f.name.clone()), &f)])
        }
        FiltCmd::Check { name } => {
            let f = ws.filtration(name)?;
            let mut out = vec![Check::law(&format!("{name}: mediators commute"), f.leq_violation())];
            out.push(Check::law(&format!("{name}: stages are directed"), f.validate().err().map(|e| e.to_string())));
            let iso = is_iso_filtration(f)?;
            out.push(Check::info(&format!("{name}: iso-filtration {iso}")));
            Ok(out)
        }
    }
}
