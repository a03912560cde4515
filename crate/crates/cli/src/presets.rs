//! Named configurations for the standard runs.

const FIG2_SWEEP: &str = "\
mode = sweep
x_axis = omega_fb
x_min = 0
x_max = 1pi
x_n = 41
y_axis = Omega_over_Gamma
y_min = 0
y_max = 2
y_n = 41
";

const FIG4_CONTOUR: &str = "\
mode = sweep
sweep_mode = contour
x_axis = gamma_over_g
x_min = 0
x_max = 0.02
x_n = 21
y_axis = kappa_over_g
y_min = 0.02
y_max = 1
y_n = 21
";

/// Three-mode model at Δ = 50g with G = 0.25g and κ = 5G, so that
/// Ω = 0.1G is 0.5Γ; runs to Gt = 1500.
const FIG5_FULL: &str = "\
mode = oracle
oracle = full
model = full
coupling = 0.25
kappa = 1.25
detuning = 50
n_max = 1
t_end = 6000
n_points = 151
";

pub const NAMES: [&str; 14] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f", "fig4a", "fig4b", "fig5a",
    "fig5b",
];

/// Config text for a named preset.
pub fn preset(name: &str) -> Option<String> {
    let nonlocal = "strategy = nonlocal\nomega_fb = 0.3pi\nOmega_over_Gamma = 0.5\n";
    let local = "strategy = local\nomega_fb = 0.5pi\nOmega_over_Gamma = 0.5\n";
    let evolve = "model = effective\nmode = evolve\nt_end = 500\nn_points = 501\n";
    let text = match name {
        "fig2a" => format!("model = effective\n{nonlocal}{FIG2_SWEEP}"),
        "fig2b" => format!("model = effective\n{local}{FIG2_SWEEP}"),
        "fig2c" => format!("model = effective\n{nonlocal}{FIG2_SWEEP}sweep_mode = finite_time\nsweep_t = 1500\n"),
        "fig2d" => format!("model = effective\n{local}{FIG2_SWEEP}sweep_mode = finite_time\nsweep_t = 1500\n"),
        "fig3a" => format!("{evolve}{nonlocal}"),
        "fig3b" => format!("{evolve}{nonlocal}eta = 0.5\n"),
        "fig3c" => format!("{evolve}{local}"),
        "fig3d" => format!("{evolve}{local}eta = 0.5\n"),
        "fig3e" => format!("{evolve}strategy = local\nomega_fb = 0.3pi\nOmega_over_Gamma = 0.5\n"),
        "fig3f" => format!("{evolve}strategy = nonlocal\nomega_fb = 0.5pi\nOmega_over_Gamma = 0.5\n"),
        "fig4a" => format!("model = effective\n{nonlocal}{FIG4_CONTOUR}"),
        "fig4b" => format!("model = effective\n{local}{FIG4_CONTOUR}"),
        "fig5a" => format!("{FIG5_FULL}{nonlocal}"),
        "fig5b" => format!("{FIG5_FULL}{local}"),
        _ => return None,
    };
    Some(text)
}
