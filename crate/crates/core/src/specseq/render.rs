use super::{E1Grid, GridDims};

fn table(columns: &[i32], rows: Vec<Vec<String>>) -> String {
    let width = rows.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1).max(4);
    let mut out = format!("{:>5} ", "");
    for p in columns {
        out.push_str(&format!(" {:>width$}", format!("p={p}")));
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        out.push_str(&format!("{:>5} ", format!("m={}", 6 - i)));
        for c in row {
            out.push_str(&format!(" {c:>width$}"));
        }
        out.push('\n');
    }
    out
}

/// Plain dimension grid in the printed seven-row layout.
pub fn render_grid(g: &GridDims) -> String {
    let rows = g.rows.iter().map(|r| r.iter().map(|d| d.to_string()).collect()).collect();
    table(&g.columns, rows)
}

/// E1 grid as printed: with at most two components every entry is spelled out
/// as a direct sum over individual strata, otherwise only totals are shown.
pub fn render_e1(e1: &E1Grid) -> String {
    table(&e1.columns(), e1_cells(e1))
}

/// E1 cells row by row, top row `m = 6` first.
pub fn e1_cells(e1: &E1Grid) -> Vec<Vec<String>> {
    let cols = e1.columns();
    let split = e1.strata(1).len() <= 2;
    (0..=6)
        .rev()
        .map(|m| cols.iter().map(|&p| e1_cell(e1, (p, m), split)).collect())
        .collect()
}

/// One E1 entry as text, e.g. `70⊕3`.
pub fn e1_cell(e1: &E1Grid, pos: super::Pos, split: bool) -> String {
    let entry = &e1.entries[&pos];
    let parts: Vec<String> = entry
        .summands
        .iter()
        .flat_map(|s| s.parts.iter().filter(|&&d| d > 0).map(|d| d.to_string()))
        .collect();
    if !split || parts.len() < 2 {
        entry.dim.to_string()
    } else {
        parts.join("⊕")
    }
}
