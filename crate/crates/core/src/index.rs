//! Prefix tree over sorted vertex sets with per-vertex inverted lists
//! threaded through the nodes, plus star children standing for every
//! disconnected single-vertex extension of a too-dense subgraph.

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};

use crate::density::{DensityConfig, MIN_CARDINALITY};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::Vertex;

/// Label of star nodes; orders after every real vertex.
pub const STAR: Vertex = Vertex::MAX;

const ROOT: NodeId = NodeId(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    fn ix(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgraphMeta {
    pub score: f64,
    pub cardinality: usize,
    pub too_dense: bool,
    /// Exploration iteration that discovered the entry during `epoch`.
    pub iteration: Option<u32>,
    pub epoch: u64,
}

impl SubgraphMeta {
    pub fn new(score: f64, cardinality: usize, epoch: u64) -> Self {
        SubgraphMeta { score, cardinality, too_dense: false, iteration: None, epoch }
    }
}

#[derive(Debug, Clone)]
struct Node {
    label: Vertex,
    parent: Option<NodeId>,
    depth: u32,
    children: BTreeMap<Vertex, NodeId>,
    meta: Option<SubgraphMeta>,
    star_score: f64,
    inv_prev: Option<NodeId>,
    inv_next: Option<NodeId>,
    live: bool,
}

impl Node {
    fn new(label: Vertex, parent: Option<NodeId>, depth: u32) -> Self {
        Node {
            label,
            parent,
            depth,
            children: BTreeMap::new(),
            meta: None,
            star_score: 0.0,
            inv_prev: None,
            inv_next: None,
            live: true,
        }
    }
}

/// One item produced by [`SubgraphIndex::visit_containing`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    /// An explicit subgraph containing `a` or `b`.
    Subgraph(NodeId),
    /// A star entry; the handle is that of the too-dense parent subgraph.
    Star(NodeId),
}

#[derive(Debug, Clone)]
pub struct SubgraphIndex {
    cfg: DensityConfig,
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    heads: HashMap<Vertex, NodeId>,
    star_head: Option<NodeId>,
    entries: usize,
    stars: usize,
    probes: Cell<u64>,
}

impl SubgraphIndex {
    pub fn new(cfg: DensityConfig) -> Self {
        SubgraphIndex {
            cfg,
            nodes: vec![Node::new(0, None, 0)],
            free: Vec::new(),
            heads: HashMap::new(),
            star_head: None,
            entries: 0,
            stars: 0,
            probes: Cell::new(0),
        }
    }

    pub fn config(&self) -> &DensityConfig {
        &self.cfg
    }

    /// Number of indexed subgraphs (star nodes excluded).
    pub fn len(&self) -> usize {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries == 0
    }

    pub fn star_count(&self) -> usize {
        self.stars
    }

    /// Allocated tree nodes, root excluded.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1 - self.free.len()
    }

    /// Child-map probes performed by [`Self::extend_lookup`] so far.
    pub fn probe_count(&self) -> u64 {
        self.probes.get()
    }

    fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.ix()]
    }

    fn node_mut(&mut self, id: NodeId) -> &mut Node {
        &mut self.nodes[id.ix()]
    }

    fn check_set(&self, set: &[Vertex]) -> Result<()> {
        let sorted = set.windows(2).all(|w| w[0] < w[1]);
        if !sorted || set.first() == Some(&0) || set.last() == Some(&STAR) {
            return Err(Error::MalformedSet(set.to_vec()));
        }
        if set.len() < MIN_CARDINALITY || set.len() > self.cfg.max_cardinality() {
            return Err(Error::CardinalityOutOfRange {
                n: set.len(),
                min: MIN_CARDINALITY,
                max: self.cfg.max_cardinality(),
            });
        }
        Ok(())
    }

    fn alloc(&mut self, label: Vertex, parent: NodeId) -> NodeId {
        let depth = self.node(parent).depth + 1;
        let node = Node::new(label, Some(parent), depth);
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id.ix()] = node;
                id
            }
            None => {
                self.nodes.push(node);
                NodeId((self.nodes.len() - 1) as u32)
            }
        };
        self.node_mut(parent).children.insert(label, id);
        self.link(id);
        id
    }

    fn list_head(&self, label: Vertex) -> Option<NodeId> {
        if label == STAR {
            self.star_head
        } else {
            self.heads.get(&label).copied()
        }
    }

    fn set_list_head(&mut self, label: Vertex, head: Option<NodeId>) {
        if label == STAR {
            self.star_head = head;
        } else {
            match head {
                Some(h) => {
                    self.heads.insert(label, h);
                }
                None => {
                    self.heads.remove(&label);
                }
            }
        }
    }

    fn link(&mut self, id: NodeId) {
        let label = self.node(id).label;
        let old = self.list_head(label);
        {
            let n = self.node_mut(id);
            n.inv_prev = None;
            n.inv_next = old;
        }
        if let Some(old) = old {
            self.node_mut(old).inv_prev = Some(id);
        }
        self.set_list_head(label, Some(id));
    }

    fn unlink(&mut self, id: NodeId) {
        let (label, prev, next) = {
            let n = self.node(id);
            (n.label, n.inv_prev, n.inv_next)
        };
        match prev {
            Some(p) => self.node_mut(p).inv_next = next,
            None => self.set_list_head(label, next),
        }
        if let Some(nx) = next {
            self.node_mut(nx).inv_prev = prev;
        }
    }

    fn release(&mut self, id: NodeId) {
        self.unlink(id);
        let (label, parent) = {
            let n = self.node(id);
            (n.label, n.parent)
        };
        if let Some(p) = parent {
            self.node_mut(p).children.remove(&label);
        }
        let n = self.node_mut(id);
        n.live = false;
        n.children.clear();
        n.meta = None;
        self.free.push(id);
    }

    /// Inserts `set` with `meta`, or replaces the meta of an existing entry.
    pub fn insert(&mut self, set: &[Vertex], mut meta: SubgraphMeta) -> Result<NodeId> {
        self.check_set(set)?;
        if !self.cfg.is_dense(set.len(), meta.score) {
            return Err(Error::SparseInsert(set.to_vec()));
        }
        meta.cardinality = set.len();
        let mut cur = ROOT;
        for &v in set {
            cur = match self.node(cur).children.get(&v) {
                Some(&c) => c,
                None => self.alloc(v, cur),
            };
        }
        if self.node(cur).meta.is_none() {
            self.entries += 1;
        }
        meta.too_dense |= self.has_star(cur);
        self.node_mut(cur).meta = Some(meta);
        self.sync_star(cur);
        Ok(cur)
    }

    pub fn lookup(&self, set: &[Vertex]) -> Option<NodeId> {
        let mut cur = ROOT;
        for v in set {
            cur = *self.node(cur).children.get(v)?;
        }
        self.node(cur).meta.as_ref().map(|_| cur)
    }

    /// Handle of `C ∪ {y}` given the handle of `C`. A single child probe
    /// when `y > max(C)`, otherwise a walk from the root.
    pub fn extend_lookup(&self, handle: NodeId, y: Vertex) -> Option<NodeId> {
        let node = self.node(handle);
        if y > node.label {
            self.probes.set(self.probes.get() + 1);
            let child = *node.children.get(&y)?;
            return self.node(child).meta.as_ref().map(|_| child);
        }
        let mut set = self.vertices(handle);
        match set.binary_search(&y) {
            Ok(_) => None,
            Err(pos) => {
                set.insert(pos, y);
                self.probes.set(self.probes.get() + set.len() as u64);
                self.lookup(&set)
            }
        }
    }

    /// Removes the entry for `set`, freeing every node that no longer leads
    /// to an entry. Returns the number of nodes freed.
    pub fn remove(&mut self, set: &[Vertex]) -> Result<usize> {
        let h = self.lookup(set).ok_or_else(|| Error::NotIndexed(set.to_vec()))?;
        Ok(self.remove_handle(h))
    }

    pub fn remove_handle(&mut self, handle: NodeId) -> usize {
        if self.node(handle).meta.is_none() {
            return 0;
        }
        let mut freed = 0;
        if self.node(handle).children.contains_key(&STAR) {
            freed += self.drop_star(handle);
        }
        self.node_mut(handle).meta = None;
        self.entries -= 1;
        let mut cur = handle;
        while cur != ROOT {
            let n = self.node(cur);
            if n.meta.is_some() || !n.children.is_empty() {
                break;
            }
            let parent = n.parent.expect("non-root node has a parent");
            self.release(cur);
            freed += 1;
            cur = parent;
        }
        freed
    }

    pub fn meta(&self, handle: NodeId) -> Option<&SubgraphMeta> {
        let n = self.nodes.get(handle.ix())?;
        if n.live {
            n.meta.as_ref()
        } else {
            None
        }
    }

    /// Sets the score of an entry, keeping its star child in step.
    pub fn set_score(&mut self, handle: NodeId, score: f64) {
        if let Some(m) = self.node_mut(handle).meta.as_mut() {
            m.score = score;
        }
        self.sync_star(handle);
    }

    pub fn set_iteration(&mut self, handle: NodeId, iteration: Option<u32>, epoch: u64) {
        if let Some(m) = self.node_mut(handle).meta.as_mut() {
            m.iteration = iteration;
            m.epoch = epoch;
        }
    }

    fn sync_star(&mut self, handle: NodeId) {
        let score = match self.node(handle).meta {
            Some(m) => m.score,
            None => return,
        };
        if let Some(&s) = self.node(handle).children.get(&STAR) {
            self.node_mut(s).star_score = score;
        }
    }

    /// Vertex set of an entry, ascending.
    pub fn vertices(&self, handle: NodeId) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.node(handle).depth as usize);
        let mut cur = handle;
        while cur != ROOT {
            let n = self.node(cur);
            out.push(n.label);
            cur = n.parent.expect("non-root node has a parent");
        }
        out.reverse();
        out
    }

    pub fn has_star(&self, handle: NodeId) -> bool {
        self.node(handle).children.contains_key(&STAR)
    }

    /// Score stored on the star child of `handle`.
    pub fn star_score(&self, handle: NodeId) -> Option<f64> {
        self.node(handle).children.get(&STAR).map(|&s| self.node(s).star_score)
    }

    /// Creates or refreshes the star child of a too-dense entry.
    pub fn mark_too_dense(&mut self, handle: NodeId) -> Result<NodeId> {
        let meta = self.node(handle).meta.ok_or_else(|| Error::NotIndexed(self.vertices(handle)))?;
        if meta.cardinality >= self.cfg.max_cardinality() {
            return Err(Error::StarAtMaxCardinality);
        }
        let star = match self.node(handle).children.get(&STAR) {
            Some(&s) => s,
            None => {
                self.stars += 1;
                self.alloc(STAR, handle)
            }
        };
        self.node_mut(star).star_score = meta.score;
        if let Some(m) = self.node_mut(handle).meta.as_mut() {
            m.too_dense = true;
        }
        Ok(star)
    }

    pub fn unmark_too_dense(&mut self, handle: NodeId) -> Result<()> {
        if !self.has_star(handle) {
            return Err(Error::NoStar(self.vertices(handle)));
        }
        self.drop_star(handle);
        if let Some(m) = self.node_mut(handle).meta.as_mut() {
            m.too_dense = false;
        }
        Ok(())
    }

    /// Updates the too-dense flag without touching star nodes.
    pub fn set_too_dense_flag(&mut self, handle: NodeId, too_dense: bool) {
        if let Some(m) = self.node_mut(handle).meta.as_mut() {
            m.too_dense = too_dense;
        }
    }

    fn drop_star(&mut self, handle: NodeId) -> usize {
        match self.node(handle).children.get(&STAR) {
            Some(&s) => {
                self.release(s);
                self.stars -= 1;
                1
            }
            None => 0,
        }
    }

    /// Every `C ∪ {y}` with `y` outside `C`, not adjacent to `C` and not
    /// explicitly indexed, for a star-marked `C`.
    pub fn expand_implicit(&self, handle: NodeId, graph: &WeightedGraph) -> Vec<Vec<Vertex>> {
        if !self.has_star(handle) {
            return Vec::new();
        }
        let set = self.vertices(handle);
        let adjacent: Vec<Vertex> = graph.merged_neighborhood(&set).into_iter().map(|(v, _)| v).collect();
        let mut out = Vec::new();
        for y in 1..=graph.universe() {
            if set.binary_search(&y).is_ok() || adjacent.binary_search(&y).is_ok() {
                continue;
            }
            if self.extend_lookup_quiet(handle, &set, y).is_some() {
                continue;
            }
            let mut ext = set.clone();
            let pos = ext.binary_search(&y).unwrap_err();
            ext.insert(pos, y);
            out.push(ext);
        }
        out
    }

    fn extend_lookup_quiet(&self, handle: NodeId, set: &[Vertex], y: Vertex) -> Option<NodeId> {
        if y > self.node(handle).label {
            let child = *self.node(handle).children.get(&y)?;
            return self.node(child).meta.as_ref().map(|_| child);
        }
        let mut ext = set.to_vec();
        let pos = ext.binary_search(&y).unwrap_or_else(|p| p);
        ext.insert(pos, y);
        self.lookup(&ext)
    }

    /// Visits every entry containing `a` or `b` exactly once, then every
    /// star. Requires `a < b`.
    pub fn visit_containing(&self, a: Vertex, b: Vertex) -> Vec<Visit> {
        debug_assert!(a < b);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        let mut cur = self.list_head(b);
        while let Some(id) = cur {
            self.walk_subtree(id, None, &mut stack, &mut out);
            cur = self.node(id).inv_next;
        }
        let mut cur = self.list_head(a);
        while let Some(id) = cur {
            self.walk_subtree(id, Some(b), &mut stack, &mut out);
            cur = self.node(id).inv_next;
        }
        let mut cur = self.star_head;
        while let Some(id) = cur {
            out.push(Visit::Star(self.node(id).parent.expect("star has a parent")));
            cur = self.node(id).inv_next;
        }
        out
    }

    fn walk_subtree(&self, start: NodeId, prune: Option<Vertex>, stack: &mut Vec<NodeId>, out: &mut Vec<Visit>) {
        stack.clear();
        stack.push(start);
        while let Some(id) = stack.pop() {
            let n = self.node(id);
            if n.meta.is_some() {
                out.push(Visit::Subgraph(id));
            }
            for (&label, &child) in n.children.iter().rev() {
                if label == STAR || Some(label) == prune {
                    continue;
                }
                stack.push(child);
            }
        }
    }

    /// Handles of all star-marked entries, in star-list order.
    pub fn stars(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.stars);
        let mut cur = self.star_head;
        while let Some(id) = cur {
            out.push(self.node(id).parent.expect("star has a parent"));
            cur = self.node(id).inv_next;
        }
        out
    }

    /// Nodes on the inverted list of `v`.
    pub fn inverted_list(&self, v: Vertex) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = self.list_head(v);
        while let Some(id) = cur {
            out.push(id);
            cur = self.node(id).inv_next;
        }
        out
    }

    /// All entries in lexicographic order of their vertex sets.
    pub fn entries(&self) -> Vec<(Vec<Vertex>, SubgraphMeta)> {
        let mut out = Vec::with_capacity(self.entries);
        let mut path = Vec::new();
        self.collect(ROOT, &mut path, &mut out);
        out
    }

    fn collect(&self, id: NodeId, path: &mut Vec<Vertex>, out: &mut Vec<(Vec<Vertex>, SubgraphMeta)>) {
        let n = self.node(id);
        if let Some(m) = n.meta {
            out.push((path.clone(), m));
        }
        for (&label, &child) in &n.children {
            if label == STAR {
                continue;
            }
            path.push(label);
            self.collect(child, path, out);
            path.pop();
        }
    }

    pub fn handles(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.entries);
        let mut stack = vec![ROOT];
        while let Some(id) = stack.pop() {
            let n = self.node(id);
            if n.meta.is_some() {
                out.push(id);
            }
            for (&label, &child) in n.children.iter().rev() {
                if label != STAR {
                    stack.push(child);
                }
            }
        }
        out
    }

    /// Structural self-check: sorted paths, dense meta, exact inverted-list
    /// membership, no dead leaves, consistent stars and counters.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut on_lists: HashMap<NodeId, Vertex> = HashMap::new();
        let mut labels: Vec<Vertex> = self.heads.keys().copied().collect();
        labels.push(STAR);
        for label in labels {
            let mut prev = None;
            let mut cur = self.list_head(label);
            while let Some(id) = cur {
                let n = self.node(id);
                if !n.live {
                    return Err(format!("dead node {id:?} on list {label}"));
                }
                if n.label != label {
                    return Err(format!("node {id:?} labeled {} on list {label}", n.label));
                }
                if n.inv_prev != prev {
                    return Err(format!("broken back link at {id:?}"));
                }
                if on_lists.insert(id, label).is_some() {
                    return Err(format!("node {id:?} listed twice"));
                }
                prev = Some(id);
                cur = n.inv_next;
            }
        }
        let (mut entries, mut stars, mut nodes) = (0, 0, 0);
        let mut stack = vec![ROOT];
        while let Some(id) = stack.pop() {
            let n = self.node(id);
            if id != ROOT {
                nodes += 1;
                if !on_lists.contains_key(&id) {
                    return Err(format!("node {id:?} missing from its inverted list"));
                }
            }
            if n.label == STAR {
                stars += 1;
                let parent = self.node(n.parent.unwrap());
                match parent.meta {
                    Some(m) if m.too_dense && m.score == n.star_score => {}
                    _ => return Err(format!("star under {:?} is inconsistent", self.vertices(n.parent.unwrap()))),
                }
                if !n.children.is_empty() {
                    return Err("star node has children".into());
                }
                continue;
            }
            if let Some(m) = n.meta {
                entries += 1;
                let set = self.vertices(id);
                if m.cardinality != set.len() {
                    return Err(format!("{set:?} has cardinality {}", m.cardinality));
                }
                if !self.cfg.is_dense(set.len(), m.score) {
                    return Err(format!("{set:?} with score {} is not dense", m.score));
                }
            } else if id != ROOT && n.children.is_empty() {
                return Err(format!("orphan leaf {:?}", self.vertices(id)));
            }
            for (&label, &child) in &n.children {
                let c = self.node(child);
                if c.label != label || c.parent != Some(id) || (label != STAR && label <= n.label && id != ROOT) {
                    return Err(format!("bad child link {label} under {:?}", self.vertices(id)));
                }
                if label == STAR && n.meta.is_none() {
                    return Err("star under a non-entry".into());
                }
                stack.push(child);
            }
        }
        if entries != self.entries || stars != self.stars || nodes != self.node_count() || nodes != on_lists.len() {
            return Err(format!(
                "counter mismatch: entries {entries}/{}, stars {stars}/{}, nodes {nodes}/{}",
                self.entries,
                self.stars,
                self.node_count()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityFamily;
    use crate::graph::EdgeUpdate;

    fn index() -> SubgraphIndex {
        let cfg = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.15).unwrap();
        SubgraphIndex::new(cfg)
    }

    fn meta(n: usize) -> SubgraphMeta {
        SubgraphMeta::new(100.0, n, 0)
    }

    fn figure_three() -> SubgraphIndex {
        let mut ix = index();
        for set in [&[1, 3][..], &[1, 3, 4], &[1, 3, 5], &[3, 4, 5], &[4, 5]] {
            ix.insert(set, meta(set.len())).unwrap();
        }
        ix
    }

    fn sets(ix: &SubgraphIndex, visits: &[Visit]) -> Vec<Vec<Vertex>> {
        visits
            .iter()
            .map(|v| match *v {
                Visit::Subgraph(h) => ix.vertices(h),
                Visit::Star(h) => {
                    let mut s = ix.vertices(h);
                    s.push(STAR);
                    s
                }
            })
            .collect()
    }

    #[test]
    fn shared_prefixes() {
        let ix = figure_three();
        assert_eq!(ix.len(), 5);
        // 1, 1-3, 1-3-4, 1-3-5, 3, 3-4, 3-4-5, 4, 4-5
        assert_eq!(ix.node_count(), 9);
        ix.audit().unwrap();
        let mut list5: Vec<_> = ix.inverted_list(5).into_iter().map(|h| ix.vertices(h)).collect();
        list5.sort();
        assert_eq!(list5, vec![vec![1, 3, 5], vec![3, 4, 5], vec![4, 5]]);
    }

    #[test]
    fn reinsert_replaces_meta() {
        let mut ix = figure_three();
        let before = ix.node_count();
        let h = ix.insert(&[1, 3], SubgraphMeta::new(7.0, 2, 3)).unwrap();
        assert_eq!(ix.node_count(), before);
        assert_eq!(ix.len(), 5);
        assert_eq!(ix.meta(h).unwrap().score, 7.0);
        assert_eq!(ix.lookup(&[1, 3]), Some(h));
    }

    #[test]
    fn rejects_sparse_and_malformed() {
        let mut ix = index();
        assert!(matches!(ix.insert(&[1, 2], SubgraphMeta::new(0.1, 2, 0)), Err(Error::SparseInsert(_))));
        assert!(matches!(ix.insert(&[2, 1], meta(2)), Err(Error::MalformedSet(_))));
        assert!(ix.insert(&[1], meta(1)).is_err());
        assert!(ix.insert(&[1, 2, 3, 4, 5], meta(5)).is_err());
        assert!(ix.is_empty());
        assert_eq!(ix.node_count(), 0);
    }

    #[test]
    fn extend_lookup_probes() {
        let ix = figure_three();
        let h13 = ix.lookup(&[1, 3]).unwrap();
        let before = ix.probe_count();
        assert_eq!(ix.extend_lookup(h13, 4), ix.lookup(&[1, 3, 4]));
        assert_eq!(ix.probe_count() - before, 1);
        assert_eq!(ix.extend_lookup(h13, 2), None);
        let h45 = ix.lookup(&[4, 5]).unwrap();
        assert_eq!(ix.extend_lookup(h45, 6), None);
        assert_eq!(ix.extend_lookup(h45, 5), None);
    }

    #[test]
    fn removal_frees_paths() {
        let mut ix = figure_three();
        assert_eq!(ix.remove(&[1, 3, 4]).unwrap(), 1);
        assert_eq!(ix.remove(&[1, 3, 5]).unwrap(), 1);
        assert_eq!(ix.remove(&[1, 3]).unwrap(), 2);
        assert_eq!(ix.remove(&[3, 4, 5]).unwrap(), 3);
        ix.audit().unwrap();
        assert_eq!(ix.remove(&[3, 4, 5]), Err(Error::NotIndexed(vec![3, 4, 5])));
        assert_eq!(ix.len(), 1);
        assert_eq!(ix.node_count(), 2);
        assert!(ix.inverted_list(1).is_empty());
        assert!(ix.inverted_list(3).is_empty());
    }

    #[test]
    fn intermediate_without_meta_freed_recursively() {
        let mut ix = index();
        ix.insert(&[3, 4, 5], meta(3)).unwrap();
        assert_eq!(ix.remove(&[3, 4, 5]).unwrap(), 3);
        assert_eq!(ix.node_count(), 0);
        ix.audit().unwrap();
    }

    #[test]
    fn exactly_once_on_figure_three() {
        let ix = figure_three();
        let visits = ix.visit_containing(1, 5);
        let got = sets(&ix, &visits);
        assert_eq!(got.len(), 5);
        let mut sorted = got.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
        let via_b: Vec<_> = got[..3].iter().map(|s| s.contains(&5)).collect();
        assert_eq!(via_b, vec![true; 3]);
        assert!(got[3..].iter().all(|s| s.contains(&1) && !s.contains(&5)));
        assert!(index().visit_containing(1, 2).is_empty());
        let mut one = index();
        one.insert(&[2, 7], meta(2)).unwrap();
        assert_eq!(one.visit_containing(2, 7).len(), 1);
    }

    #[test]
    fn star_lifecycle() {
        let mut ix = figure_three();
        let h = ix.lookup(&[1, 3]).unwrap();
        ix.mark_too_dense(h).unwrap();
        assert_eq!(ix.star_count(), 1);
        assert!(ix.meta(h).unwrap().too_dense);
        ix.set_score(h, 55.0);
        assert_eq!(ix.star_score(h), Some(55.0));
        ix.audit().unwrap();
        let visits = ix.visit_containing(2, 4);
        assert!(visits.contains(&Visit::Star(h)));
        assert_eq!(ix.stars(), vec![h]);
        let full = ix.lookup(&[1, 3, 4]).unwrap();
        let mut ix4 = ix.clone();
        let h4 = ix4.insert(&[1, 2, 3, 4], meta(4)).unwrap();
        assert_eq!(ix4.mark_too_dense(h4), Err(Error::StarAtMaxCardinality));
        ix.unmark_too_dense(h).unwrap();
        assert!(!ix.has_star(h));
        assert!(ix.meta(full).is_some());
        assert!(ix.unmark_too_dense(h).is_err());
        ix.audit().unwrap();
    }

    #[test]
    fn removing_starred_entry_drops_star() {
        let mut ix = index();
        let h = ix.insert(&[1, 3], meta(2)).unwrap();
        ix.mark_too_dense(h).unwrap();
        assert_eq!(ix.remove(&[1, 3]).unwrap(), 3);
        assert_eq!(ix.star_count(), 0);
        assert!(ix.stars().is_empty());
        ix.audit().unwrap();
    }

    #[test]
    fn implicit_expansion() {
        let mut g = WeightedGraph::new(7);
        for (a, b) in [(1, 3), (1, 4), (3, 5)] {
            g.apply_update(&EdgeUpdate::new(0, a, b, 1.0)).unwrap();
        }
        let mut ix = index();
        let h = ix.insert(&[1, 3], meta(2)).unwrap();
        assert!(ix.expand_implicit(h, &g).is_empty());
        ix.mark_too_dense(h).unwrap();
        ix.insert(&[1, 3, 6], meta(3)).unwrap();
        assert_eq!(ix.expand_implicit(h, &g), vec![vec![1, 2, 3], vec![1, 3, 7]]);
    }
}
