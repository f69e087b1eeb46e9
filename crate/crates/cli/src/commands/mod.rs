mod control;
mod geophase;
mod pert;
mod plaquette_cmds;
mod report;

use crate::Registry;

pub fn register_all(r: &mut Registry) {
    r.register(Box::new(plaquette_cmds::Spectrum));
    r.register(Box::new(plaquette_cmds::PreparePlus));
    r.register(Box::new(pert::Coeffs));
    r.register(Box::new(pert::Fidelity));
    r.register(Box::new(pert::Allowed));
    r.register(Box::new(pert::Validate));
    r.register(Box::new(control::Optimize));
    r.register(Box::new(control::GradCheck));
    r.register(Box::new(control::Robustness));
    r.register(Box::new(control::LieDim));
    r.register(Box::new(geophase::Table));
    r.register(Box::new(geophase::Dynamics));
    r.register(Box::new(geophase::Schwinger));
    r.register(Box::new(plaquette_cmds::HubbardCheck));
    r.register(Box::new(report::Report));
}
