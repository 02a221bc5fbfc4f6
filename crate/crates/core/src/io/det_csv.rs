//! CSV export of sampled Jacobian-determinant fields.
//!
//! Layout: a 3-line header (region, resolution, min_det summary) followed by
//! the determinant values row-major, one grid row per CSV line.

use crate::io::landmarks::fmt9;
use crate::registration::JacobianField;

pub fn to_csv(field: &JacobianField) -> String {
    let r = field.region;
    let mut out = String::new();
    out.push_str(&format!(
        "# region: {} {} {} {}\n",
        fmt9(r.xmin),
        fmt9(r.ymin),
        fmt9(r.xmax),
        fmt9(r.ymax)
    ));
    out.push_str(&format!("# resolution: {} {}\n", field.nx, field.ny));
    out.push_str(&format!(
        "# min_det: {} at {} {} negative_fraction: {}\n",
        fmt9(field.min_det),
        fmt9(field.argmin.x),
        fmt9(field.argmin.y),
        fmt9(field.negative_fraction)
    ));
    for row in field.det_values.chunks(field.nx) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&fmt9(*v));
            first = false;
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Kernel, KernelFamily};
    use crate::registration::{Rect, Transformation};

    #[test]
    fn identity_field_layout() {
        let t = Transformation::identity(Kernel::new(KernelFamily::Wendland31, 1.0).unwrap());
        let f = t.det_field(Rect::unit(), 3, 2).unwrap();
        let csv = to_csv(&f);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("# region: "));
        assert_eq!(lines[1], "# resolution: 3 2");
        assert!(lines[2].starts_with("# min_det: 1.00000000e0"));
        assert_eq!(lines[3].split(',').count(), 3);
        assert_eq!(lines[3], lines[4]);
    }
}
