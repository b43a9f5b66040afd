//! Generate each mesh family, print its shape statistics and write the
//! polymesh files next to the current directory.
//!
//! ```sh
//! cargo run --example mesh_gallery
//! ```

use vortexfv::mesh::{
    generate_cartesian, generate_mixed_triquad, generate_perturbed_quad, generate_polygonal,
    BoundaryKind, Mesh,
};

fn stats(name: &str, mesh: &Mesh) {
    let max_e = (0..mesh.n_cells())
        .map(|c| mesh.corners(c).len())
        .max()
        .unwrap();
    let h = vortexfv::timeint::min_length_scale(mesh);
    println!(
        "{name:16} cells {:6}  nodes {:6}  edges {:6}  ghosts {:4}  max #edges/cell {}  min h {:.4}",
        mesh.n_cells(),
        mesh.n_nodes(),
        mesh.n_edges(),
        mesh.n_cells_total() - mesh.n_cells(),
        max_e,
        h,
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 16;
    let outdir = std::path::Path::new("out/meshes");
    std::fs::create_dir_all(outdir)?;

    let cart = generate_cartesian(n, n, 1.0 / n as f64, 1.0 / n as f64, BoundaryKind::Periodic)?;
    let quad = generate_perturbed_quad(n, n, 0.2, 42, BoundaryKind::Periodic)?;
    let triquad = generate_mixed_triquad(n, n, 0.5, 42, BoundaryKind::Periodic)?;
    let poly = generate_polygonal(2 * n, n, 0, BoundaryKind::Periodic)?;
    let ghosted = generate_mixed_triquad(n, n, 0.5, 42, BoundaryKind::ZeroGradient)?;

    stats("cartesian", &cart);
    stats("perturbed quad", &quad);
    stats("mixed tri-quad", &triquad);
    stats("polygonal", &poly);
    stats("zero-gradient", &ghosted);

    for (name, mesh) in [
        ("cartesian", &cart),
        ("quad", &quad),
        ("triquad", &triquad),
        ("polygonal", &poly),
    ] {
        let path = outdir.join(format!("{name}.txt"));
        vortexfv::mesh::write_mesh(mesh, &path)?;
        let back = vortexfv::mesh::read_mesh(&path)?;
        assert_eq!(back.n_cells(), mesh.n_cells());
        println!("wrote {} (round trip ok)", path.display());
    }
    Ok(())
}
