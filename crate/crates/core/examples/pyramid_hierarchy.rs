//! Bounded pyramid autoreductions: every bound c is eventually refuted.

use omega_degrees::rigidity::{generate_candidates, pyramid_autoreduction, PyramidStep};
use omega_degrees::{unpair, Result};

fn main() -> Result<()> {
    for h in generate_candidates("projection+collapse+shuffle:seed=2+affine:amax=2,bmax=1", 0)? {
        for c in 1..=4 {
            let g = pyramid_autoreduction(&h, c)?;
            let (mut moved, mut refuted, mut fixed) = (0, 0, 0);
            let mut example = None;
            for x in c..1000 {
                match g.apply(x)? {
                    PyramidStep::Moved { .. } => moved += 1,
                    PyramidStep::BoundRefuted { x, column } => {
                        assert_eq!(column.len() as u64, x + 1);
                        refuted += 1;
                        example.get_or_insert((
                            x,
                            column
                                .iter()
                                .map(|&z| unpair(z))
                                .take(3)
                                .collect::<Vec<_>>(),
                        ));
                    }
                    PyramidStep::Fixed { .. } => fixed += 1,
                }
            }
            println!(
                "{:<18} c={c}: moved {moved:>3}, bound refuted {refuted:>3}, fixed {fixed}",
                h.name()
            );
            if let Some((x, head)) = example.filter(|_| c == 1) {
                println!("{:<18}      e.g. x={x}: column starts {head:?}", "");
            }
        }
    }
    Ok(())
}
