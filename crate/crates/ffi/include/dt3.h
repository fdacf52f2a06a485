/* C ABI for the dt3 triangulation engine.
 *
 * Ownership: constructors write an owned handle through the out-pointer on
 * DT3_OK; release handles with the matching _free function. All functions
 * are safe to call from any thread; handles are not internally
 * synchronized (share read-only or guard externally).
 */

#ifndef DT3_H
#define DT3_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dt3_status {
  DT3_OK = 0,
  DT3_ERR_BAD_PARAMS = 1,
  DT3_ERR_DUPLICATE_POINTS = 2,
  DT3_ERR_DEGENERATE = 3,
  DT3_ERR_NULL_POINTER = 4,
  DT3_ERR_BUFFER_TOO_SMALL = 5,
  DT3_ERR_PANIC = 6,
} dt3_status;

typedef struct dt3_cloud dt3_cloud;
typedef struct dt3_triangulation dt3_triangulation;

/* Point clouds. xyz is a flat array of 3*n doubles. */
dt3_status dt3_cloud_from_points(const double *xyz, size_t n, dt3_cloud **out);
dt3_status dt3_cloud_helix_sqrt(size_t n, dt3_cloud **out);
dt3_status dt3_cloud_helix_spread(size_t n, double delta, dt3_cloud **out);
dt3_status dt3_cloud_single_turn(size_t n, dt3_cloud **out);
dt3_status dt3_cloud_mattress(size_t n, double delta, dt3_cloud **out);
dt3_status dt3_cloud_seams(size_t m, double eps, dt3_cloud **out);
dt3_status dt3_cloud_ball_rows(uint32_t k, size_t per_sphere, uint64_t seed,
                               dt3_cloud **out);
size_t dt3_cloud_len(const dt3_cloud *cloud);
void dt3_cloud_free(dt3_cloud *cloud);

/* Delaunay triangulation. Lower-dimensional (collinear/coplanar) clouds
 * yield DT3_ERR_DEGENERATE. */
dt3_status dt3_triangulate(const dt3_cloud *cloud, uint64_t seed,
                           dt3_triangulation **out);
size_t dt3_edge_count(const dt3_triangulation *tri);
size_t dt3_tet_count(const dt3_triangulation *tri);
/* Edges as flat (a, b) pairs; cap counts uint32 slots; *written receives
 * the required slot count. */
dt3_status dt3_edges(const dt3_triangulation *tri, uint32_t *buf, size_t cap,
                     size_t *written);
/* Tetrahedra as flat vertex-index quadruples. */
dt3_status dt3_tets(const dt3_triangulation *tri, uint32_t *buf, size_t cap,
                    size_t *written);
/* Full structural + empty-circumsphere validation; *valid receives 1/0. */
dt3_status dt3_validate(const dt3_triangulation *tri, int32_t *valid);
void dt3_triangulation_free(dt3_triangulation *tri);

/* Spread metrics of a cloud. */
dt3_status dt3_spread(const dt3_cloud *cloud, double *closest,
                      double *diameter, double *spread);

/* Exact predicate signs (-1, 0, +1); each pointer references 3 doubles.
 * dt3_orient3d is +1 when d sees (a,b,c) counterclockwise; dt3_insphere is
 * +1 when e lies strictly inside the circumsphere of a positively oriented
 * (a,b,c,d). */
int32_t dt3_orient3d(const double *a, const double *b, const double *c,
                     const double *d);
int32_t dt3_insphere(const double *a, const double *b, const double *c,
                     const double *d, const double *e);

/* Static version string. */
const char *dt3_version(void);

#ifdef __cplusplus
}
#endif

#endif /* DT3_H */
