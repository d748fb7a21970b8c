//! Per-point evaluation of each task.

use liddi::dressing::ground_pair_state;
use liddi::liouvillian::{evolve, max_step, steady_state, GeneratorMatrix};
use liddi::observables::{large_detuning_potential, liddi_potential, scattering_rate};
use liddi::{PotentialBreakdown, Result, Sideband, TwoAtomState};

use crate::config::{InitialState, Numerics, StateChoice, Task};
use crate::model::Scenario;

const POTENTIAL: [&str; 4] = ["u_total", "u_z", "u_plus", "u_minus"];

/// Value columns of `task`, without the sweep label and error columns.
pub fn columns(task: Task) -> Vec<String> {
    let owned = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match task {
        Task::Potential => owned(&POTENTIAL),
        Task::Steady => {
            let mut c = owned(&["rho11", "rho22", "rho33", "rho44", "re_rho23", "im_rho23"]);
            c.extend(owned(&POTENTIAL));
            c
        }
        Task::Evolve => {
            let mut c = owned(&["t"]);
            for part in ["re", "im"] {
                for n in 0..4 {
                    for m in 0..4 {
                        c.push(format!("rho_{part}_{n}{m}"));
                    }
                }
            }
            c.extend(owned(&POTENTIAL));
            c
        }
        Task::Scatter => owned(&["r_total", "r_z", "r_plus", "r_minus"]),
        Task::Rddi => owned(&["delta_plus", "delta_z", "delta_minus"]),
        Task::Validate => owned(&["passed"]),
    }
}

fn potential_values(u: &PotentialBreakdown) -> [f64; 4] {
    [u.total, u.u_z, u.u_plus, u.u_minus]
}

fn initial_state(s: &Scenario, initial: InitialState) -> Result<TwoAtomState> {
    Ok(match initial {
        InitialState::Ground => ground_pair_state(&s.frame, &s.frame)?,
        InitialState::Mixed => TwoAtomState::maximally_mixed(),
        InitialState::Pp => TwoAtomState::basis(0),
        InitialState::Pm => TwoAtomState::basis(1),
        InitialState::Mp => TwoAtomState::basis(2),
        InitialState::Mm => TwoAtomState::basis(3),
    })
}

fn step(gen: &GeneratorMatrix, n: &Numerics) -> f64 {
    n.dt.unwrap_or_else(|| max_step(gen).min(n.t_final.max(f64::MIN_POSITIVE)))
}

fn state(s: &Scenario, n: &Numerics) -> Result<TwoAtomState> {
    match n.state {
        StateChoice::Steady => steady_state(&s.generator()?),
        StateChoice::Transient => ground_pair_state(&s.frame, &s.frame),
        StateChoice::Evolved => {
            let gen = s.generator()?;
            let rho0 = initial_state(s, n.initial)?;
            let traj = evolve(&gen, &rho0, n.t_final, step(&gen, n))?;
            Ok(traj.states.last().cloned().unwrap_or(rho0))
        }
        StateChoice::LargeDetuning => Err(liddi::Error::Unsupported(
            "large-detuning state outside the potential task",
        )),
    }
}

/// Rows for one sweep point; every task but `evolve` yields exactly one.
pub fn evaluate(task: Task, s: &Scenario, n: &Numerics) -> Result<Vec<Vec<f64>>> {
    let row = match task {
        Task::Potential => {
            let u = match n.state {
                StateChoice::LargeDetuning => large_detuning_potential(&s.table, &s.frame, &s.r12)?,
                _ => liddi_potential(&state(s, n)?, &s.table, &s.frame, &s.r12)?,
            };
            potential_values(&u).to_vec()
        }
        Task::Steady => {
            let rho = steady_state(&s.generator()?)?;
            let u = liddi_potential(&rho, &s.table, &s.frame, &s.r12)?;
            let mut row: Vec<f64> = (0..4).map(|k| rho.element(k, k).re).collect();
            let c = rho.element(1, 2);
            row.extend([c.re, c.im]);
            row.extend(potential_values(&u));
            row
        }
        Task::Evolve => {
            let gen = s.generator()?;
            let rho0 = initial_state(s, n.initial)?;
            let traj = evolve(&gen, &rho0, n.t_final, step(&gen, n))?;
            let last = traj.states.len() - 1;
            let mut rows = Vec::new();
            for (k, (t, rho)) in traj.times.iter().zip(&traj.states).enumerate() {
                if k % n.record_every != 0 && k != last {
                    continue;
                }
                let u = liddi_potential(rho, &s.table, &s.frame, &s.r12)?;
                let m = rho.matrix();
                let mut row = vec![*t];
                row.extend(m.transpose().iter().map(|z| z.re));
                row.extend(m.transpose().iter().map(|z| z.im));
                row.extend(potential_values(&u));
                rows.push(row);
            }
            return Ok(rows);
        }
        Task::Scatter => {
            let r = scattering_rate(&state(s, n)?, &s.table, &s.frame);
            vec![r.total, r.r_z, r.r_plus, r.r_minus]
        }
        Task::Rddi => Sideband::ALL.iter().map(|&b| s.table.delta(b, 0, 1).re).collect(),
        Task::Validate => unreachable!("validation is not evaluated per sweep point"),
    };
    Ok(vec![row])
}
