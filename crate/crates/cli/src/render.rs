//! SVG heat maps of sign matrices: red `+1`, blue `-1`, gray `0`.
//!
//! The dictionary grid sits on top and the vector strip below it, one cell
//! per entry. Gray is drawn once as a background per panel and only nonzero
//! runs are emitted, so large dictionaries stay small on disk.

use std::fmt::Write as _;

pub const CELL: usize = 10;
pub const GAP: usize = 10;
pub const RED: &str = "#d62728";
pub const BLUE: &str = "#1f77b4";
pub const GRAY: &str = "#bbbbbb";

fn color(v: i8) -> &'static str {
    match v.signum() {
        1 => RED,
        -1 => BLUE,
        _ => GRAY,
    }
}

fn panel(out: &mut String, id: &str, top: usize, rows: &[Vec<i8>]) {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    writeln!(out, r#"<g id="{id}">"#).unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="{top}" width="{}" height="{}" fill="{GRAY}"/>"#,
        width * CELL,
        height * CELL
    )
    .unwrap();
    for (r, row) in rows.iter().enumerate() {
        let mut c = 0;
        while c < row.len() {
            let v = row[c];
            let start = c;
            while c < row.len() && row[c] == v {
                c += 1;
            }
            if v != 0 {
                writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{}" height="{CELL}" fill="{}"/>"#,
                    start * CELL,
                    top + r * CELL,
                    (c - start) * CELL,
                    color(v)
                )
                .unwrap();
            }
        }
    }
    out.push_str("</g>\n");
}

/// Renders an optional dictionary (dense rows) above an optional vector.
/// Panels are left-aligned; when both are present the vector should have
/// one entry per dictionary column.
pub fn render_svg(dictionary: Option<&[Vec<i8>]>, vector: Option<&[i8]>) -> String {
    let dict_rows = dictionary.map_or(0, <[_]>::len);
    let dict_cols = dictionary.and_then(|d| d.first()).map_or(0, Vec::len);
    let strip_cols = vector.map_or(0, <[_]>::len);
    let width = dict_cols.max(strip_cols) * CELL;
    let strip_top = if dictionary.is_some() { dict_rows * CELL + GAP } else { 0 };
    let height = if vector.is_some() { strip_top + CELL } else { dict_rows * CELL };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" shape-rendering="crispEdges">"#
    )
    .unwrap();
    if let Some(d) = dictionary {
        panel(&mut out, "dictionary", 0, d);
    }
    if let Some(v) = vector {
        panel(&mut out, "vector", strip_top, &[v.to_vec()]);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str, pat: &str) -> usize {
        s.matches(pat).count()
    }

    #[test]
    fn runs_and_colors() {
        let d = vec![vec![1, 1, 0, -1], vec![0, 0, 0, 0]];
        let svg = render_svg(Some(&d), Some(&[0, -1, 1, 1]));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains(r#"width="40" height="40""#));
        assert!(svg.contains(&format!(r#"<rect x="0" y="0" width="20" height="10" fill="{RED}"/>"#)));
        assert!(svg.contains(&format!(r#"<rect x="30" y="0" width="10" height="10" fill="{BLUE}"/>"#)));
        assert!(svg.contains(&format!(r#"<rect x="10" y="30" width="10" height="10" fill="{BLUE}"/>"#)));
        assert!(svg.contains(&format!(r#"<rect x="20" y="30" width="20" height="10" fill="{RED}"/>"#)));
        assert_eq!(count(&svg, GRAY), 2);
    }

    #[test]
    fn zero_vector_is_all_gray() {
        let svg = render_svg(None, Some(&[0; 12]));
        assert_eq!(count(&svg, "<rect"), 1);
        assert!(svg.contains(&format!(r#"width="120" height="10" fill="{GRAY}""#)));
    }
}
