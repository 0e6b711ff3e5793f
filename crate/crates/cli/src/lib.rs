//! Command-line front end: tables, Deligne-Lusztig expansions, projective
//! characters, relations, the solver and the acceptance suite.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use unidec::blocks::{parabolic_tree, ParabolicGroup};
use unidec::decsolve::{solve_with, Mode, Options, Solution, SolveError};
use unidec::hc::psi_columns;
use unidec::lusztig::{lusztig, relation_vectors};
use unidec::polyq::{EllCase, Rational};
use unidec::unipotent::enumerate;
use unidec::verify;
use unidec::weyl::weyl_group;

/// Row- and column-labelled table of exact values printed as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub tables: Vec<Table>,
    pub checks: Vec<CheckLine>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Degrees,
    Classes,
    Characters,
    Families,
    Blocks,
    Trees,
    Fourier,
}

#[derive(Parser, Debug)]
#[command(name = "unidec", version, about = "Unipotent decomposition numbers for SO5(q), SO7(q), Sp6(q) and l | q+1")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_rank(s: &str) -> Result<usize, String> {
    match s {
        "2" => Ok(2),
        "3" => Ok(3),
        _ => Err(format!("rank must be 2 or 3, got `{s}`")),
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print one of the data tables.
    Table {
        #[arg(value_enum)]
        which: TableKind,
        #[arg(long, value_parser = parse_rank, default_value = "3")]
        rank: usize,
        #[arg(long, default_value = "large")]
        case: EllCase,
    },
    /// Unipotent expansion of R_w(1) for a word in the simple reflections.
    Dl {
        #[arg(long, value_parser = parse_rank)]
        rank: usize,
        /// Space-separated generator indices, e.g. "1 2 3"; empty for 1.
        #[arg(long, default_value = "")]
        word: String,
    },
    /// The projective characters Ψᵢ on the principal block.
    Psi {
        #[arg(long, value_parser = parse_rank)]
        rank: usize,
        #[arg(long)]
        case: EllCase,
    },
    /// ℓ-regular relation vectors.
    Relations {
        #[arg(long, value_parser = parse_rank)]
        rank: usize,
        #[arg(long)]
        case: EllCase,
    },
    /// Principal-block decomposition matrix.
    Solve {
        #[arg(long, value_parser = parse_rank)]
        rank: usize,
        #[arg(long)]
        case: EllCase,
        #[arg(long, default_value = "derive")]
        mode: Mode,
    },
    /// Run every acceptance criterion.
    VerifyAll,
}

/// Exit status, structured report and its rendering.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Report,
    pub rendered: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let command: Vec<String> = argv.iter().skip(1).cloned().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let report = Report { command, notes: vec![rendered.clone()], ..Default::default() };
            return Outcome { code, report, rendered };
        }
    };
    let mut report = Report { command, ..Default::default() };
    let code = match execute(&cli.cmd, &mut report) {
        Ok(code) => code,
        Err(e) => {
            report.notes.push(format!("error: {e}"));
            1
        }
    };
    let rendered = render(&report, cli.format);
    Outcome { code, report, rendered }
}

fn execute(cmd: &Cmd, report: &mut Report) -> Result<i32, String> {
    match cmd {
        Cmd::Table { which, rank, case } => table(*which, *rank, *case, report),
        Cmd::Dl { rank, word } => dl(*rank, word, report),
        Cmd::Psi { rank, case } => psi(*rank, *case, report),
        Cmd::Relations { rank, case } => relations(*rank, *case, report),
        Cmd::Solve { rank, case, mode } => solve(*rank, *case, *mode, report),
        Cmd::VerifyAll => {
            let checks = verify::run_all();
            let ok = checks.iter().all(|c| c.passed);
            report.checks = checks
                .into_iter()
                .map(|c| CheckLine { name: format!("{}. {}", c.criterion, c.name), passed: c.passed, detail: c.detail })
                .collect();
            return Ok(if ok { 0 } else { 1 });
        }
    }
    .map(|()| 0)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn rational(r: &Rational) -> String {
    r.to_string()
}

fn table(which: TableKind, m: usize, case: EllCase, report: &mut Report) -> Result<(), String> {
    let set = enumerate(m).map_err(err)?;
    match which {
        TableKind::Degrees => report.tables.push(Table {
            name: format!("unipotent degrees, rank {m}"),
            row_labels: set.labels.iter().map(|l| l.to_string()).collect(),
            column_labels: vec!["symbol".into(), "degree".into()],
            entries: set.labels.iter().zip(&set.degrees).map(|(l, d)| vec![l.symbol().to_string(), d.to_string()]).collect(),
        }),
        TableKind::Classes => {
            let w = weyl_group(m).map_err(err)?;
            let rows = w
                .classes()
                .iter()
                .map(|c| {
                    let cd = w.class_data(&c.rep_word).unwrap();
                    vec![
                        word_text(&c.rep_word),
                        c.size.to_string(),
                        c.min_length.to_string(),
                        cd.centralizer_order.to_string(),
                        format!("({}, {})", c.cycle_type.0, c.cycle_type.1),
                        cd.char_poly.to_string(),
                    ]
                })
                .collect();
            report.tables.push(Table {
                name: format!("conjugacy classes of W(B{m})"),
                row_labels: (1..=w.classes().len()).map(|i| i.to_string()).collect(),
                column_labels: ["word", "size", "length", "centralizer", "cycle type", "det(q - w)"].map(String::from).to_vec(),
                entries: rows,
            });
        }
        TableKind::Characters => {
            let w = weyl_group(m).map_err(err)?;
            let t = w.character_table();
            report.tables.push(Table {
                name: format!("character table of W(B{m})"),
                row_labels: t.labels.iter().map(|b| b.to_string()).collect(),
                column_labels: w.classes().iter().map(|c| word_text(&c.rep_word)).collect(),
                entries: t.values.iter().map(|r| r.iter().map(rational).collect()).collect(),
            });
        }
        TableKind::Families => report.tables.push(Table {
            name: format!("families, rank {m}"),
            row_labels: (1..=set.families.len()).map(|i| i.to_string()).collect(),
            column_labels: vec!["members".into(), "special".into()],
            entries: set
                .families
                .iter()
                .map(|f| {
                    let members: Vec<String> = f.members.iter().map(|&i| set.labels[i].to_string()).collect();
                    vec![members.join(" "), set.labels[f.special].to_string()]
                })
                .collect(),
        }),
        TableKind::Blocks => report.tables.push(Table {
            name: format!("ℓ-block distribution, rank {m}"),
            row_labels: set.labels.iter().map(|l| l.to_string()).collect(),
            column_labels: vec!["block".into()],
            entries: set.blocks.iter().map(|b| vec![format!("{b:?}")]).collect(),
        }),
        TableKind::Trees => {
            let groups: &[ParabolicGroup] = if m == 2 { &[ParabolicGroup::P5] } else { &[ParabolicGroup::P7, ParabolicGroup::P6Star] };
            for &g in groups {
                let t = parabolic_tree(g, case);
                report.tables.push(Table {
                    name: format!("Brauer tree of {g}, {case}"),
                    row_labels: t.nodes.iter().map(|s| s.to_string()).collect(),
                    column_labels: vec!["multiplicity".into()],
                    entries: (0..3).map(|i| vec![if i == t.exceptional { t.m_exp.to_string() } else { "1".into() }]).collect(),
                });
                if let Some(c) = t.caveat {
                    report.notes.push(format!("{g}: {c}"));
                }
            }
        }
        TableKind::Fourier => {
            let l = lusztig(m).map_err(err)?;
            for b in &l.blocks {
                let labels: Vec<String> = b.members.iter().map(|&i| set.labels[i].to_string()).collect();
                report.tables.push(Table {
                    name: format!("Fourier matrix of family {}", b.family + 1),
                    row_labels: labels.clone(),
                    column_labels: labels,
                    entries: b.matrix.iter().map(|r| r.iter().map(rational).collect()).collect(),
                });
            }
        }
    }
    Ok(())
}

fn word_text(w: &[usize]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn dl(m: usize, word: &str, report: &mut Report) -> Result<(), String> {
    let w: Vec<usize> = word.split_whitespace().map(|s| s.parse::<usize>().map_err(err)).collect::<Result<_, _>>()?;
    let l = lusztig(m).map_err(err)?;
    let r = l.dl_character(&w).map_err(err)?;
    let set = enumerate(m).map_err(err)?;
    let nz: Vec<usize> = (0..set.len()).filter(|&i| r.coeffs[i] != Rational::from_integer(0.into())).collect();
    report.tables.push(Table {
        name: format!("R_w(1), w = {}", word_text(&w)),
        row_labels: nz.iter().map(|&i| set.labels[i].to_string()).collect(),
        column_labels: vec!["coefficient".into()],
        entries: nz.iter().map(|&i| vec![rational(&r.coeffs[i])]).collect(),
    });
    report.notes.push(r.to_string());
    Ok(())
}

fn principal_labels(m: usize) -> Result<Vec<String>, String> {
    let set = enumerate(m).map_err(err)?;
    Ok(set.principal_block().iter().map(|&i| set.labels[i].to_string()).collect())
}

fn psi(m: usize, case: EllCase, report: &mut Report) -> Result<(), String> {
    let levi = if m == 3 { Some(unidec::decsolve::solve(2, case).map_err(err)?.levi_pims()) } else { None };
    let cols = psi_columns(m, case, levi.as_ref()).map_err(err)?;
    let rows = principal_labels(m)?;
    report.tables.push(Table {
        name: format!("projective characters, rank {m}, {case}"),
        column_labels: cols.iter().map(|c| c.name.clone()).collect(),
        entries: (0..rows.len()).map(|i| cols.iter().map(|c| c.values[i].to_string()).collect()).collect(),
        row_labels: rows,
    });
    for c in &cols {
        let series = c.series.as_ref().map(|t| format!(", series {t}")).unwrap_or_default();
        report.notes.push(format!("{} = {}{series}", c.name, c.source));
        report.notes.extend(c.dropped_notes());
    }
    Ok(())
}

fn relations(m: usize, case: EllCase, report: &mut Report) -> Result<(), String> {
    let rels = relation_vectors(m, case).map_err(err)?;
    let set = enumerate(m).map_err(err)?;
    report.tables.push(Table {
        name: format!("relation vectors, rank {m}, {case}"),
        row_labels: rels.iter().map(|r| r.name.clone()).collect(),
        column_labels: set.labels.iter().map(|l| l.to_string()).collect(),
        entries: rels.iter().map(|r| r.vector.coeffs.iter().map(rational).collect()).collect(),
    });
    for r in &rels {
        report.notes.push(format!("{} = {}", r.name, r.def.describe()));
    }
    Ok(())
}

fn solve(m: usize, case: EllCase, mode: Mode, report: &mut Report) -> Result<(), String> {
    let opts = Options { mode, ..Default::default() };
    match solve_with(m, case, &opts) {
        Ok(sol) => {
            solution_report(&sol, report);
            Ok(())
        }
        Err(SolveError::Unresolved(open)) => {
            report.notes.extend(open);
            Err("some entries stay unresolved".into())
        }
        Err(e) => Err(e.to_string()),
    }
}

fn solution_report(sol: &Solution, report: &mut Report) {
    let cols: Vec<String> = sol.columns.iter().zip(&sol.tags).map(|(c, t)| format!("{c} ({t})")).collect();
    report.tables.push(Table {
        name: format!("decomposition matrix, rank {}, {}", sol.m, sol.case),
        row_labels: sol.rows.iter().map(|l| l.to_string()).collect(),
        column_labels: cols,
        entries: sol.entries.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect(),
    });
    report.tables.push(Table {
        name: "named entries".into(),
        row_labels: sol.named.iter().map(|(u, _)| u.to_string()).collect(),
        column_labels: vec!["value".into()],
        entries: sol.named.iter().map(|(_, v)| vec![v.to_string()]).collect(),
    });
    report.tables.push(Table {
        name: "multiplicities of Φⱼ in Ψₖ".into(),
        row_labels: sol.psi.iter().map(|p| p.name.clone()).collect(),
        column_labels: sol.columns.iter().map(|c| c.replace('φ', "Φ")).collect(),
        entries: sol.multiplicities.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect(),
    });
    if !sol.dudas.is_empty() {
        report.tables.push(Table {
            name: "sign bounds".into(),
            row_labels: sol.dudas.iter().map(|d| word_text(&d.word)).collect(),
            column_labels: vec!["length".into(), "pairing".into(), "imposed ≥ 0".into()],
            entries: sol.dudas.iter().map(|d| vec![d.length.to_string(), d.pairing.to_string(), d.imposed.to_string()]).collect(),
        });
    }
    report.checks = sol.audit.iter().map(|a| CheckLine { name: a.name.clone(), passed: a.passed, detail: a.detail.clone() }).collect();
    let fams: Vec<String> = sol.contributions.iter().map(|(f, n)| format!("{f}: {n}")).collect();
    report.notes.push(format!("bound changes by family: {}", fams.join(", ")));
    report.notes.extend(sol.notes.iter().cloned());
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Csv => render_csv(report),
        Format::Text => render_text(report),
    }
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    format!("{s}{}", " ".repeat(w.saturating_sub(width(s))))
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for t in &report.tables {
        let _ = writeln!(out, "{}", t.name);
        let ncols = t.column_labels.len();
        let mut widths = vec![t.row_labels.iter().map(|s| width(s)).max().unwrap_or(0)];
        for j in 0..ncols {
            let w = t.entries.iter().map(|r| width(&r[j])).chain([width(&t.column_labels[j])]).max().unwrap_or(0);
            widths.push(w);
        }
        let line = |first: &str, cells: &[String]| -> String {
            let mut s = pad(first, widths[0]);
            for (j, c) in cells.iter().enumerate() {
                s.push_str("  ");
                s.push_str(&pad(c, widths[j + 1]));
            }
            s.trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line("", &t.column_labels));
        for (r, row) in t.row_labels.iter().zip(&t.entries) {
            let _ = writeln!(out, "{}", line(r, row));
        }
        out.push('\n');
    }
    for c in &report.checks {
        let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for n in &report.notes {
        let _ = writeln!(out, "{n}");
    }
    out
}

fn render_csv(report: &Report) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(vec![]);
    for t in &report.tables {
        let _ = w.write_record([t.name.as_str()]);
        let _ = w.write_record(std::iter::once("").chain(t.column_labels.iter().map(String::as_str)));
        for (r, row) in t.row_labels.iter().zip(&t.entries) {
            let _ = w.write_record(std::iter::once(r.as_str()).chain(row.iter().map(String::as_str)));
        }
    }
    if !report.checks.is_empty() {
        let _ = w.write_record(["check", "passed", "detail"]);
        for c in &report.checks {
            let _ = w.write_record([c.name.as_str(), if c.passed { "true" } else { "false" }, c.detail.as_str()]);
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}
