//! Every named check for one dictionary, in a fixed order.

use alloc::format;
use alloc::vec::Vec;

use crate::designs::{
    a_matrix, build_net, latin_family, verify_a_matrix, verify_a_matrix_against_squares,
    verify_mols, verify_net,
};
use crate::dict::{apply, DictError, Family, ScaledDictionary, SparseVector};
use crate::gf::{ExtensionField, Field};
use crate::hadamard::{
    permuted_hadamard, verify_extension_structure, verify_orthogonality,
    verify_permuted_structure, verify_sigma_bijection,
};
use crate::mub::{verify_blocks, MubError};
use crate::report::CheckReport;

/// Checks of the ingredients (field designs, net, Hadamard matrices) that
/// the construction of `family` at order `q` is built from. For the
/// extension family these run over GF(q^2) and include the sub-field column
/// structure.
pub fn construction_checks(family: Family, q: usize) -> Result<Vec<CheckReport>, DictError> {
    family.validate_q(q)?;
    let base = Field::of_order(q)?;
    let ext = match family {
        Family::Base => None,
        Family::Extension => Some(ExtensionField::new(&base)?),
    };
    let field = ext.as_ref().map_or(&base, ExtensionField::field);

    let mut out = Vec::new();
    let squares = latin_family(field);
    out.extend(verify_mols(field, &squares).checks().into_iter().cloned());
    let a = a_matrix(field);
    let ar = verify_a_matrix(field, &a);
    out.push(ar.row_zero_permutation);
    out.push(ar.collision_law);
    out.push(verify_a_matrix_against_squares(field, &a, &squares));
    let nr = verify_net(&build_net(field));
    out.extend([nr.within_family, nr.across_families, nr.self_products]);

    let h = permuted_hadamard(field.degree()).map_err(MubError::from)?;
    out.push(verify_sigma_bijection(field.degree()));
    out.push(verify_orthogonality(&h));
    let pr = verify_permuted_structure(field, &h).map_err(MubError::from)?;
    out.extend([pr.unit_border, pr.sign_flip]);
    if let Some(ext) = &ext {
        let er = verify_extension_structure(ext, &h).map_err(MubError::from)?;
        out.extend([er.subfield_rows, er.paired_columns]);
    }
    Ok(out)
}

/// Unit columns, orthonormal blocks and pairwise unbiasedness of `dict`.
pub fn dictionary_checks(dict: &ScaledDictionary) -> Vec<CheckReport> {
    let r = verify_blocks(dict.columns(), dict.scale_sq());
    Vec::from([r.column_weight, r.orthogonality, r.unbiased])
}

/// `M x = 0` and the support has the size the construction predicts.
pub fn kernel_check(dict: &ScaledDictionary, x: &SparseVector) -> CheckReport {
    let mut report = CheckReport::new("kernel");
    match apply(dict, x) {
        Ok(residual) => {
            for (r, &v) in residual.iter().enumerate() {
                report.check(v == 0, || format!("row {r}: (Mx)_{r} = {v}"));
            }
            let want = dict.family().null_support(dict.q());
            let got = x.support_size();
            report.check(got == want, || format!("support size {got}, expected {want}"));
            report.check(x.entries().iter().all(|e| e.1.abs() == 1), || {
                "vector has entries outside {-1, +1}".into()
            });
        }
        Err(e) => report.fail(format!("{e}")),
    }
    report
}
