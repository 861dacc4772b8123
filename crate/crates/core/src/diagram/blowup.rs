//! Rewrite rules for one blow-up.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    Center, CurveId, Diagram, DiagramError, Event, Image, Mark, Surface, SurfaceId, SurfaceOrigin,
};

/// How a scheduled center shows up in this fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterContext {
    pub generic_multiplicity: usize,
    /// Largest number of surfaces through a piece of the center here.
    pub central_multiplicity: usize,
    pub central_geometry: CentralGeometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CentralGeometry {
    Absent,
    Point,
    Curve,
    /// Several curves, some of them crossing.
    TwoCrossingCurves,
    DisjointCurves,
}

struct Ctx<'a> {
    center: &'a Center,
}

impl Ctx<'_> {
    fn conflict(&self, reason: impl Into<String>) -> DiagramError {
        DiagramError::RuleConflict { center: self.center.label.clone(), reason: reason.into() }
    }
}

impl Diagram {
    fn covers(&self, surfaces: &BTreeSet<SurfaceId>, center: &Center) -> bool {
        center.groups.is_subset(&self.groups_of(surfaces))
    }

    /// Curves of the center in this diagram.
    fn center_curves(&self, center: &Center) -> Vec<CurveId> {
        self.curves.values().filter(|c| self.covers(&c.surfaces, center)).map(|c| c.id).collect()
    }

    fn center_points(&self, center: &Center) -> Vec<usize> {
        self.points
            .values()
            .filter(|p| p.is_meeting() && self.covers(&self.point_surfaces(p), center))
            .map(|p| p.id)
            .collect()
    }

    /// Compare the center with what this fiber contains.
    pub fn center_context(&self, center: &Center) -> Result<CenterContext, DiagramError> {
        if let Some(g) = center.groups.iter().find(|g| !self.has_group(g)) {
            return Err(DiagramError::CenterNotInDiagram(format!("{} ({g})", center.label)));
        }
        let a = center.generic_multiplicity();
        if center.kind.is_point() {
            let pts = self.center_points(center);
            return Ok(match pts.as_slice() {
                [] => CenterContext { generic_multiplicity: a, central_multiplicity: 0, central_geometry: CentralGeometry::Absent },
                [p] => CenterContext {
                    generic_multiplicity: a,
                    central_multiplicity: self.point_surfaces(&self.points[p]).len(),
                    central_geometry: CentralGeometry::Point,
                },
                _ => return Err(DiagramError::RuleConflict { center: center.label.clone(), reason: "center point is not unique".into() }),
            });
        }
        let cs = self.center_curves(center);
        let b = cs.iter().map(|c| self.curves[c].surfaces.len()).max().unwrap_or(0);
        let crossing = self.points.values().any(|p| p.is_meeting() && p.curves.iter().filter(|c| cs.contains(c)).count() >= 2);
        let geometry = match (cs.len(), crossing) {
            (0, _) => CentralGeometry::Absent,
            (1, _) => CentralGeometry::Curve,
            (_, true) => CentralGeometry::TwoCrossingCurves,
            (_, false) => CentralGeometry::DisjointCurves,
        };
        Ok(CenterContext { generic_multiplicity: a, central_multiplicity: b, central_geometry: geometry })
    }

    /// Apply one blow-up and return the new diagram; `self` is untouched.
    pub fn apply_blowup(&self, center: &Center, ctx: &CenterContext) -> Result<Diagram, DiagramError> {
        let derived = self.center_context(center)?;
        if &derived != ctx {
            return Err(DiagramError::RuleConflict {
                center: center.label.clone(),
                reason: format!("context {ctx:?} does not match the diagram ({derived:?})"),
            });
        }
        let mut d = self.clone();
        let start = d.events.len();
        let cx = Ctx { center };
        if center.kind.is_point() {
            d.blow_point(&cx)?;
        } else {
            d.blow_curves(&cx)?;
        }
        d.merge_events(start);
        if d.events.len() - start > 2 {
            return Err(cx.conflict("more than two events from one blow-up"));
        }
        d.check_integrity().map_err(|e| cx.conflict(e))?;
        Ok(d)
    }

    /// Convenience wrapper deriving the context itself.
    pub fn blow_up(&self, center: &Center) -> Result<Diagram, DiagramError> {
        let ctx = self.center_context(center)?;
        self.apply_blowup(center, &ctx)
    }

    fn point_image(&self, p: usize) -> Image {
        let pt = &self.points[&p];
        let mut planes = BTreeSet::new();
        for c in &pt.curves {
            match &self.curves[c].image {
                Image::Point(s) => return Image::Point(s.clone()),
                Image::Line(s) => planes.extend(s.iter().copied()),
            }
        }
        Image::Point(planes.into_iter().collect())
    }

    /// Decide whether the exceptional divisor enters the branch locus and,
    /// if so, create its surface.
    fn exceptional_surface(&mut self, cx: &Ctx, b: usize, through: &BTreeSet<SurfaceId>) -> Result<Option<SurfaceId>, DiagramError> {
        let a = cx.center.generic_multiplicity();
        if b < a {
            return Err(cx.conflict(format!("multiplicity {b} below generic {a}")));
        }
        match b - 2 * (a / 2) {
            0 => Ok(None),
            1 => {
                let (group, origin) = if a % 2 == 1 && b == a {
                    let g = cx.center.new_group.clone().unwrap_or_else(|| self.next_letter());
                    (g, SurfaceOrigin::Exceptional)
                } else {
                    let groups: Vec<String> = through.iter().map(|&s| self.surfaces[s].group.clone()).collect();
                    let extra: Vec<&String> = groups.iter().filter(|g| !cx.center.groups.contains(*g)).collect();
                    let g = match extra.as_slice() {
                        [g] => (*g).clone(),
                        [] => {
                            let dup: Vec<&String> = groups.iter().filter(|g| groups.iter().filter(|h| h == g).count() > 1).collect();
                            match dup.first() {
                                Some(g) => (*g).clone(),
                                None => return Err(cx.conflict("no component to split")),
                            }
                        }
                        _ => return Err(cx.conflict("several components could split")),
                    };
                    let parent = self.base_label(&g);
                    (g, SurfaceOrigin::Split { parent })
                };
                let label = self.next_label(&group);
                self.events.push(match &origin {
                    SurfaceOrigin::Split { parent } => Event::SplitComponent { parent: parent.clone(), new: vec![label.clone()] },
                    _ => Event::NewExceptionalSurface { surfaces: vec![label.clone()] },
                });
                self.surfaces.push(Surface { label, group, origin });
                Ok(Some(self.surfaces.len() - 1))
            }
            m => Err(cx.conflict(format!("exceptional divisor would have multiplicity {m}"))),
        }
    }

    /// Fold the events of one blow-up so each kind appears once per parent.
    fn merge_events(&mut self, start: usize) {
        let fresh: Vec<Event> = self.events.drain(start..).collect();
        for e in fresh {
            let merged = self.events[start..].iter_mut().any(|prev| match (prev, &e) {
                (Event::SplitComponent { parent: p0, new: n0 }, Event::SplitComponent { parent: p1, new: n1 }) if p0 == p1 => {
                    n0.extend(n1.iter().cloned());
                    true
                }
                (Event::NewExceptionalSurface { surfaces: s0 }, Event::NewExceptionalSurface { surfaces: s1 }) => {
                    s0.extend(s1.iter().cloned());
                    true
                }
                _ => false,
            });
            if !merged {
                self.events.push(e);
            }
        }
    }

    fn next_letter(&self) -> String {
        let used: BTreeSet<String> = self.surfaces.iter().map(|s| s.group.clone()).collect();
        (b'A'..=b'Z').map(|c| (c as char).to_string()).find(|l| !used.contains(l)).expect("letters exhausted")
    }

    fn base_label(&self, group: &str) -> String {
        if group.parse::<usize>().is_ok() {
            format!("P{group}")
        } else {
            group.to_string()
        }
    }

    fn next_label(&self, group: &str) -> String {
        let n = self.surfaces.iter().filter(|s| s.group == group).count();
        format!("{}{}", self.base_label(group), "'".repeat(n))
    }

    fn blow_point(&mut self, cx: &Ctx) -> Result<(), DiagramError> {
        let pts = self.center_points(cx.center);
        let v = match pts.as_slice() {
            [] => return Ok(()),
            [v] => *v,
            _ => return Err(cx.conflict("center point is not unique")),
        };
        let through = self.point_surfaces(&self.points[&v]);
        let image = self.point_image(v);
        let e = self.exceptional_surface(cx, through.len(), &through)?;
        let mut lines: BTreeMap<SurfaceId, CurveId> = BTreeMap::new();
        if let Some(e) = e {
            for &s in &through {
                let id = self.add_curve([s, e].into(), [s].into(), image.clone());
                lines.insert(s, id);
            }
        }
        let curves: Vec<CurveId> = self.points[&v].curves.iter().copied().collect();
        for (i, &c) in curves.iter().enumerate() {
            for &c2 in &curves[i + 1..] {
                if self.curves[&c].surfaces.intersection(&self.curves[&c2].surfaces).count() >= 2 {
                    return Err(cx.conflict("curves through the center are tangent"));
                }
            }
        }
        self.points.remove(&v);
        for c in curves {
            let mut at: BTreeSet<CurveId> = [c].into();
            for s in &self.curves[&c].surfaces {
                if let Some(l) = lines.get(s) {
                    at.insert(*l);
                }
            }
            self.add_point(at, BTreeSet::new());
        }
        Ok(())
    }

    fn blow_curves(&mut self, cx: &Ctx) -> Result<(), DiagramError> {
        let cs = self.center_curves(cx.center);
        if cs.is_empty() {
            return Ok(());
        }
        if cs.iter().any(|&c| self.pinch_count(c) > 0) {
            return Err(cx.conflict("center carries a pinch point"));
        }
        // Crossings of center curves: each is a pinch on an existing curve or a node pair.
        let crossings: Vec<usize> = self
            .points
            .values()
            .filter(|p| p.is_meeting() && p.curves.iter().filter(|c| cs.contains(c)).count() >= 2)
            .map(|p| p.id)
            .collect();
        let mut pinches: BTreeMap<CurveId, usize> = BTreeMap::new();
        let mut nodes = 0;
        for x in crossings {
            let pt = self.points[&x].clone();
            let pair: Vec<CurveId> = pt.curves.iter().copied().filter(|c| cs.contains(c)).collect();
            if pair.len() != 2 {
                return Err(cx.conflict("more than two center curves cross at a point"));
            }
            let s1 = &self.curves[&pair[0]].surfaces;
            let s2 = &self.curves[&pair[1]].surfaces;
            let delta: BTreeSet<SurfaceId> = s1.symmetric_difference(s2).copied().collect();
            if delta.is_empty() {
                nodes += 1;
            } else {
                let host = pt.curves.iter().copied().find(|c| !pair.contains(c) && self.curves[c].surfaces == delta);
                match host {
                    Some(h) => *pinches.entry(h).or_default() += 1,
                    None => return Err(cx.conflict("crossing center curves without a curve on the differing surfaces")),
                }
            }
            self.points.remove(&x);
        }
        for (&h, &count) in &pinches {
            for _ in 0..count {
                self.add_point([h].into(), [Mark::Pinch].into());
            }
            let label = self.curve_label(h);
            self.events.push(Event::NewPinch { curve: h, label, count });
        }
        if nodes > 0 {
            let surface = format!("E({})", cx.center.label);
            for _ in 0..nodes {
                self.node_pairs.push(surface.clone());
            }
            self.events.push(Event::NewNodePair { surface });
        }
        for c in cs {
            self.blow_curve(cx, c)?;
        }
        Ok(())
    }

    fn blow_curve(&mut self, cx: &Ctx, c: CurveId) -> Result<(), DiagramError> {
        let curve = self.curves[&c].clone();
        let surf = curve.surfaces.clone();
        let e = self.exceptional_surface(cx, surf.len(), &surf)?;
        let mut sections: BTreeMap<SurfaceId, CurveId> = BTreeMap::new();
        if let Some(e) = e {
            for &s in &surf {
                sections.insert(s, self.add_curve([s, e].into(), BTreeSet::new(), curve.image.clone()));
            }
        }
        let on_c: Vec<usize> = self.points.values().filter(|p| p.curves.contains(&c)).map(|p| p.id).collect();
        for v in on_c {
            let pt = self.points[&v].clone();
            if !pt.is_meeting() {
                self.points.remove(&v);
                continue;
            }
            let image = self.point_image(v);
            let at_v = self.point_surfaces(&pt);
            let others: Vec<CurveId> = pt.curves.iter().copied().filter(|&d| d != c).collect();
            let transverse: BTreeSet<SurfaceId> = at_v.difference(&surf).copied().collect();
            let mut fiber_surfaces = transverse.clone();
            fiber_surfaces.extend(e);
            let fiber = (fiber_surfaces.len() >= 2).then(|| self.add_curve(fiber_surfaces, transverse.clone(), image));

            // Surfaces of c that stay glued at v through other curves.
            let mut class: BTreeMap<SurfaceId, SurfaceId> = surf.iter().map(|&s| (s, s)).collect();
            fn find(class: &BTreeMap<SurfaceId, SurfaceId>, mut s: SurfaceId) -> SurfaceId {
                while class[&s] != s {
                    s = class[&s];
                }
                s
            }
            for &d in &others {
                let k: Vec<SurfaceId> = self.curves[&d].surfaces.intersection(&surf).copied().collect();
                for w in k.windows(2) {
                    let (r0, r1) = (find(&class, w[0]), find(&class, w[1]));
                    if r0 != r1 {
                        class.insert(r0.max(r1), r0.min(r1));
                    }
                }
            }
            let mut groups: BTreeMap<SurfaceId, BTreeSet<CurveId>> = BTreeMap::new();
            let mut lonely: Vec<CurveId> = vec![];
            for &d in &others {
                match self.curves[&d].surfaces.intersection(&surf).next() {
                    Some(&s) => {
                        groups.entry(find(&class, s)).or_default().insert(d);
                    }
                    None => lonely.push(d),
                }
            }
            for (&s, sec) in &sections {
                groups.entry(find(&class, s)).or_default().insert(*sec);
            }
            self.points.remove(&v);
            let mut met: BTreeSet<CurveId> = BTreeSet::new();
            for (_, mut at) in groups {
                at.extend(fiber);
                if at.len() >= 2 {
                    met.extend(at.iter().copied());
                }
                self.add_point(at, BTreeSet::new());
            }
            for d in lonely {
                let at: BTreeSet<CurveId> = [d].into_iter().chain(fiber).collect();
                if at.len() >= 2 {
                    met.extend(at.iter().copied());
                }
                self.add_point(at, BTreeSet::new());
            }
            // Curves that used to meet here and no longer do.
            let parted: BTreeSet<CurveId> = others.iter().copied().filter(|d| !met.contains(d)).collect();
            if parted.len() >= 2 {
                self.add_point(parted, [Mark::Separated].into());
            }
        }
        self.remove_curve(c);
        Ok(())
    }
}
