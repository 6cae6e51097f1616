//! Economy figure of merit for the bundled source table.
use pdcsim::design::table1;

fn main() {
    for r in table1() {
        let flag = if r.discrepancy { "  differs from reported" } else { "" };
        println!("{:<20} R = {:.3e} Hz/(mm W)  reported {:.2e}{flag}", r.label, r.r, r.reported_r.unwrap_or(f64::NAN));
    }
}
