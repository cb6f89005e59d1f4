use std::fmt::Write;

use schubert_core::Permutation;

/// Text picture of the Rothe diagram: `o` marks `(i, w(i))`, `-` and `|`
/// are the hooks running east and south of each dot, `+` is a crossing of
/// two hooks, and `#` marks the boxes of the diagram.
pub fn ascii(w: &Permutation) -> String {
    let n = w.n();
    let diagram = w.rothe_diagram();
    let inv = w.inverse();
    let mut out = String::new();
    for row in 1..=n {
        for col in 1..=n {
            let east = col > w.at(row);
            let south = inv.at(col) < row;
            let c = if w.at(row) == col {
                'o'
            } else if diagram.contains(&schubert_core::Cell { row, col }) {
                '#'
            } else {
                match (east, south) {
                    (true, true) => '+',
                    (true, false) => '-',
                    (false, true) => '|',
                    (false, false) => '.',
                }
            };
            out.push(c);
            if col < n {
                out.push(' ');
            }
        }
        out.push('\n');
    }
    out
}

/// SVG drawing of the Rothe diagram in the same layout as [`ascii`].
pub fn svg(w: &Permutation) -> String {
    const CELL: usize = 30;
    let n = w.n();
    let size = n * CELL;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#);
    for cell in w.rothe_diagram() {
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="lightgray" stroke="black"/>"#,
            (cell.col - 1) * CELL,
            (cell.row - 1) * CELL
        );
    }
    for k in 0..=n {
        let t = k * CELL;
        let _ = writeln!(s, r#"<line x1="0" y1="{t}" x2="{size}" y2="{t}" stroke="black" stroke-width="0.5"/>"#);
        let _ = writeln!(s, r#"<line x1="{t}" y1="0" x2="{t}" y2="{size}" stroke="black" stroke-width="0.5"/>"#);
    }
    for row in 1..=n {
        let cx = (w.at(row) - 1) * CELL + CELL / 2;
        let cy = (row - 1) * CELL + CELL / 2;
        let _ = writeln!(s, r#"<polyline points="{size},{cy} {cx},{cy} {cx},{size}" fill="none" stroke="red" stroke-width="2"/>"#);
        let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="4" fill="red"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
