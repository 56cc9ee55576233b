//! The timed benchmark pass must not allocate once its cursor is warm.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;

use tilegraph::graph_io::generate_graph;
use tilegraph::{LmGraph, StripeGraph};
use tilegraph_cli::bench::{sample_nodes, Mode, QueryTarget};

struct Counting;

thread_local! {
    static ALLOCATIONS: Cell<u64> = const { Cell::new(0) };
}

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        ALLOCATIONS.with(|c| c.set(c.get() + 1));
        unsafe { System.alloc(layout) }
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) }
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        ALLOCATIONS.with(|c| c.set(c.get() + 1));
        unsafe { System.realloc(ptr, layout, new_size) }
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

fn allocations() -> u64 {
    ALLOCATIONS.with(Cell::get)
}

fn assert_warm_pass_is_allocation_free(target: QueryTarget<'_>, nodes: &[u64]) {
    let mut cursor = target.cursor();
    let warm = target.pass(nodes, &mut cursor).unwrap();
    let before = allocations();
    let again = target.pass(nodes, &mut cursor).unwrap();
    assert_eq!(allocations(), before);
    assert_eq!(warm, again);
}

#[test]
fn warm_passes_do_not_allocate() {
    let g = generate_graph(6000, 12.0, 0.5, 17).unwrap();
    let nodes = sample_nodes(6000, 3000, 1);
    for h in [8, 64] {
        let lm = LmGraph::compress(&g, h).unwrap();
        assert_warm_pass_is_allocation_free(QueryTarget::Lm(&lm), &nodes);
    }
    for (side, stripes) in [(128, 0), (256, 32), (2048, 8)] {
        let sg = StripeGraph::compress(&g, side, stripes).unwrap();
        for mode in [Mode::Succ, Mode::Pred] {
            assert_warm_pass_is_allocation_free(QueryTarget::Stripes(&sg, mode), &nodes);
        }
    }
}
