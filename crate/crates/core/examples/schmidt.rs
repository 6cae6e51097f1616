//! Numeric Schmidt decomposition of the Gaussian model against the
//! closed-form eigenvalues.
use pdcsim::schmidt::{analytic_eigenvalues, analytic_k, analytic_mu, schmidt_svd};
use pdcsim::spectra::{default_model_grid, gaussian_model_jsa, GaussianSourceModel};

fn main() -> pdcsim::Result<()> {
    let model = GaussianSourceModel::new(4e13, 2e13)?;
    let grid = default_model_grid(&model, 2.35e15, 200)?;
    let d = schmidt_svd(&gaussian_model_jsa(&model, &grid, &grid)?)?;
    let mu = analytic_mu(&model);
    let (exact, _) = analytic_eigenvalues(mu, 8)?;
    println!("mu = {mu:.6}, K = {:.6} (analytic {:.6})", d.k, analytic_k(mu)?);
    println!("n  lambda_svd        lambda_exact");
    for (n, (a, b)) in d.eigenvalues.iter().zip(&exact).enumerate() {
        println!("{n}  {a:.12}  {b:.12}");
    }
    Ok(())
}
