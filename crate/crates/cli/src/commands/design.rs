//! `kerrgen design`: elimination roots, cascade and reference network.

use scheme_design::{design_scheme, DetectionScheme};

use crate::args::DesignArgs;
use crate::error::Result;
use crate::output::{fmt_complex, fmt_f64, Artifact, Cell};
use crate::target::{resolve, ResolvedTarget};

/// Synthesizes the scheme and tabulates one row per detector.
pub fn design(t: &ResolvedTarget) -> Result<(DetectionScheme, Artifact)> {
    let scheme = design_scheme(&t.target, t.gamma, t.delta)?;
    let mut art = Artifact::new(
        "design",
        vec![
            "detector",
            "root_re",
            "root_im",
            "root_abs",
            "root_arg",
            "multiplicity",
            "transmittance",
            "ref_re",
            "ref_im",
        ],
    );
    t.echo(&mut art);
    art.note("q", fmt_f64(scheme.q));
    art.note("reference_master", fmt_complex(scheme.ref_net.gtilde_master));
    let list = |v: &[f64]| v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(" ");
    art.note("reference_transmittances", list(&scheme.ref_net.tp));
    art.note("reference_phases", list(&scheme.ref_net.phi));
    let mults: Vec<usize> = scheme
        .roots
        .roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.mult, r.mult))
        .collect();
    for (j, root) in scheme.roots.expanded().iter().enumerate() {
        let g = scheme.gtilde[j];
        art.push(vec![
            Cell::from(j + 1),
            root.re.into(),
            root.im.into(),
            root.norm().into(),
            root.arg().into(),
            mults[j].into(),
            scheme.t[j].into(),
            g.re.into(),
            g.im.into(),
        ]);
    }
    Ok((scheme, art))
}

pub fn run(args: &DesignArgs) -> Result<()> {
    let t = resolve(&args.target)?;
    let (scheme, art) = design(&t)?;
    if let Some(path) = &args.scheme_out {
        std::fs::write(path, scheme.to_json()? + "\n")?;
    }
    art.write(args.output.format, args.output.out.as_deref())
}
