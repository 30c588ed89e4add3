#![allow(dead_code)]

use handleweave::families::{Family, FamilyInstance};
use handleweave::freegroup::{w2, Letter, Sign, Word};
use handleweave::ribbon::{Parity, RibbonSurface};

/// Boundary curves of a disk with bands, traced as flags `(slot, direction)`.
/// Each step crosses a band and then runs along one free arc of the disk;
/// a twisted band reverses the running direction. Flag orbits that cover the
/// same arc lie on the same curve.
pub struct Faces {
    pub count: usize,
    /// Curve label of the arc from slot `i` to slot `i + 1`.
    pub arc: Vec<usize>,
    /// Flag orbit that runs along arc `i` from slot `i` to slot `i + 1`.
    pub forward_orbit: Vec<usize>,
}

pub fn faces(order: &[usize], odd: &[bool]) -> Faces {
    let n = order.len();
    if n == 0 {
        return Faces { count: 1, arc: vec![0], forward_orbit: vec![0] };
    }
    let mut pos = vec![0; n];
    for (i, &e) in order.iter().enumerate() {
        pos[e] = i;
    }
    // orbit id per flag, then arcs joined by union over their two traversals
    let mut orbit = vec![usize::MAX; 2 * n];
    let mut arc_orbits = vec![Vec::new(); n];
    let mut forward_orbit = vec![usize::MAX; n];
    let mut orbits = 0;
    for start in 0..2 * n {
        if orbit[start] != usize::MAX {
            continue;
        }
        let mut flag = start;
        while orbit[flag] == usize::MAX {
            orbit[flag] = orbits;
            let (slot, backwards) = (flag / 2, flag % 2 == 1);
            let end = order[slot];
            let j = pos[end ^ 1];
            let backwards = backwards ^ odd[end / 2];
            let (next, arc) = if backwards { ((j + n - 1) % n, (j + n - 1) % n) } else { ((j + 1) % n, j) };
            arc_orbits[arc].push(orbits);
            if !backwards {
                forward_orbit[arc] = orbits;
            }
            flag = 2 * next + usize::from(backwards);
        }
        orbits += 1;
    }
    let mut parent: Vec<usize> = (0..orbits).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            v = p[v];
        }
        v
    }
    for list in &arc_orbits {
        for w in list.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut label = vec![usize::MAX; orbits];
    let mut count = 0;
    let arc = arc_orbits
        .iter()
        .map(|list| {
            let r = find(&mut parent, list[0]);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            label[r]
        })
        .collect();
    Faces { count, arc, forward_orbit }
}

pub fn surface_faces(s: &RibbonSurface) -> Faces {
    let odd: Vec<bool> = (0..s.num_bands()).map(|b| s.parity(b) == Parity::Odd).collect();
    faces(s.order(), &odd)
}

/// `(orientable, genus or crosscap number, boundary)` from the flag tracer
/// and the Euler characteristic `1 - bands`.
pub fn classify(s: &RibbonSurface) -> (bool, usize, usize) {
    let b = surface_faces(s).count as i64;
    let chi = 1 - s.num_bands() as i64;
    let orientable = (0..s.num_bands()).all(|i| s.parity(i) == Parity::Even);
    let deficit = 2 - chi - b;
    let g = if orientable { deficit / 2 } else { deficit };
    (orientable, g as usize, b as usize)
}

/// Free reduction by repeatedly deleting the leftmost cancelling pair.
pub fn naive_reduce(mut letters: Vec<Letter>) -> Vec<Letter> {
    loop {
        let hit = letters.windows(2).position(|p| p[0].generator == p[1].generator && p[0].sign != p[1].sign);
        match hit {
            Some(i) => {
                letters.drain(i..i + 2);
            }
            None => return letters,
        }
    }
}

pub fn inverse_letters(w: &Word) -> Vec<Letter> {
    w.letters()
        .iter()
        .rev()
        .map(|l| Letter::new(l.generator, if l.sign == Sign::Plus { Sign::Minus } else { Sign::Plus }))
        .collect()
}

pub fn cat(parts: &[Word]) -> Word {
    Word::product(2, parts).unwrap()
}

pub fn pw(text: &str, e: i64) -> Word {
    w2(text).pow(e)
}

/// Every valid instance with at most `max_bands` bands and `n <= max_n`.
pub fn instances(max_bands: usize, max_n: usize) -> Vec<FamilyInstance> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for n in 1..=max_n {
            for k in 0..=max_n + 1 {
                for primed in [false, true] {
                    let inst = FamilyInstance::new(family, n, k, primed);
                    if inst.validate().is_ok() && inst.band_count() <= max_bands {
                        out.push(inst);
                    }
                }
            }
        }
    }
    out
}
