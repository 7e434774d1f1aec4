/* Build: cargo build -p overlay-sim-ffi
 *        cc crates/ffi/examples/smoke.c -Icrates/ffi/include \
 *           target/debug/liboverlay_sim_ffi.a -lpthread -ldl -lm -o smoke */
#include <stdio.h>
#include "overlay_sim.h"

int main(void) {
    OsimNetwork *net = NULL;
    if (osim_network_generate(50, 15, 7, &net) != OSIM_STATUS_OK) {
        fprintf(stderr, "generate: %s\n", osim_last_error_message());
        return 1;
    }
    uint8_t target[3] = {2, 2, 2};
    OsimSearchOutcome out;
    for (size_t i = 0; i < 50; i++) {
        osim_search(net, OSIM_MODE_ADAPTIVE, i, target, 1.0, 10, &out);
    }
    double mean = 0.0;
    osim_network_mean_link_distance(net, &mean);
    printf("nodes=%zu edges=%zu mean_link_distance=%.3f last_success=%d\n",
           osim_network_node_count(net), osim_network_edge_count(net), mean, out.success);
    osim_network_free(net);
    return 0;
}
