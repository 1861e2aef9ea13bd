use super::{check_hyperbolic, Location, MetricTable, MetricTree, TreeBuilder};
use crate::error::TreeError;
use crate::num::Scalar;

/// Realizes a finite 0-hyperbolic metric as a [`MetricTree`] whose designated
/// points are the table's points.
///
/// Points are inserted one at a time. The `k`-th point branches off the
/// current tree on the arc `[x0, xj]` at distance `max_j (xk, xj)_x0` from
/// `x0`, with a pendant edge of length `d(x0, xk)` minus that product.
pub fn reconstruct_tree<S: Scalar>(space: &MetricTable<S>) -> Result<MetricTree<S>, TreeError> {
    let n = space.len();
    if n == 0 {
        return Err(TreeError::Empty);
    }
    let verdict = check_hyperbolic(space, &S::zero());
    if let Some(w) = verdict.witness {
        return Err(TreeError::NotHyperbolic { x: w.x, y: w.y, z: w.z, w: w.w, margin: w.margin.to_string() });
    }

    let names = space.names();
    let mut builder: TreeBuilder<S> = TreeBuilder::new();
    let mut fresh = 0usize;
    let mut new_vertex = |b: &mut TreeBuilder<S>| loop {
        let name = format!("_v{fresh}");
        fresh += 1;
        if !b.index.contains_key(&name) && !names.contains(&name) {
            return b.vertex(&name);
        }
    };
    let v0 = new_vertex(&mut builder);
    let mut point_vertex = vec![v0];

    for k in 1..n {
        let tree = snapshot(&builder, &point_vertex, names)?;
        let (best, reach) = (0..k)
            .map(|j| (j, space.gromov_product_idx(k, j, 0)))
            .fold(None::<(usize, S)>, |acc, (j, g)| match acc {
                Some((_, ref m)) if g <= *m => acc,
                _ => Some((j, g)),
            })
            .expect("k >= 1");
        let pendant = space.get(0, k).clone() - reach.clone();
        let x0 = Location::Vertex(tree.vertex_id(&builder.vertices[point_vertex[0]]).expect("vertex"));
        let xj = Location::Vertex(tree.vertex_id(&builder.vertices[point_vertex[best]]).expect("vertex"));
        let anchor = match tree.point_along(&x0, &xj, &reach) {
            Location::Vertex(v) => builder.index[tree.vertex_name(v)],
            Location::OnEdge { edge, offset } => {
                let (a, b, len) = builder.edges[edge.0].clone();
                let mid = new_vertex(&mut builder);
                builder.edges[edge.0] = (a, mid, offset.clone());
                builder.edges.push((mid, b, len - offset));
                mid
            }
        };
        if pendant.is_positive() {
            let leaf = new_vertex(&mut builder);
            builder.edges.push((anchor, leaf, pendant));
            point_vertex.push(leaf);
        } else {
            if point_vertex.contains(&anchor) {
                return Err(TreeError::RoundTrip(names[k].clone(), names[best].clone()));
            }
            point_vertex.push(anchor);
        }
    }

    let tree = snapshot(&builder, &point_vertex, names)?;
    for i in 0..n {
        for j in 0..n {
            let d = tree.distance_by_name(&names[i], &names[j])?;
            if !d.approx_eq(space.get(i, j)) {
                return Err(TreeError::RoundTrip(names[i].clone(), names[j].clone()));
            }
        }
    }
    Ok(tree)
}

fn snapshot<S: Scalar>(builder: &TreeBuilder<S>, point_vertex: &[usize], names: &[String]) -> Result<MetricTree<S>, TreeError> {
    let mut b = builder.clone();
    for (i, &v) in point_vertex.iter().enumerate() {
        let vname = b.vertices[v].clone();
        b.point_at(&names[i], &vname);
    }
    b.build()
}
