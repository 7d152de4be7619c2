#include <stdio.h>
#include <string.h>

#include "ser_ffi.h"

#define CHECK(expr)                                                        \
    do {                                                                   \
        SerStatus status_ = (expr);                                        \
        if (status_ != SER_STATUS_OK) {                                    \
            fprintf(stderr, "%s: %s\n", #expr, ser_status_message(status_)); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    SerReplay *replay = NULL;
    CHECK(ser_replay_new(SER_SAMPLER_STRATIFIED, 4, 7, &replay));

    SerTransition t = {0, 0, 1.0, 1, false};
    CHECK(ser_replay_insert(replay, &t));
    CHECK(ser_replay_insert(replay, &t));
    t.state = 3;
    CHECK(ser_replay_insert(replay, &t));

    double p = 0.0;
    CHECK(ser_replay_slot_probability(replay, 2, &p));
    if (p != 0.5) {
        fprintf(stderr, "slot 2 probability %f\n", p);
        return 1;
    }

    SerTransition batch[8];
    size_t slots[8];
    CHECK(ser_replay_sample_batch(replay, 8, slots, batch));
    for (int i = 0; i < 8; i++) {
        if (slots[i] > 2 || batch[i].reward != 1.0) {
            fprintf(stderr, "bad draw %d\n", i);
            return 1;
        }
    }

    SerStats stats;
    CHECK(ser_replay_stats(replay, &stats));
    printf("size=%zu keys=%zu max_multiplicity=%zu\n", stats.size, stats.num_keys, stats.max_multiplicity);
    ser_replay_free(replay);

    if (ser_replay_new(SER_SAMPLER_UNIFORM, 0, 0, &replay) != SER_STATUS_ZERO_CAPACITY) {
        return 1;
    }
    double score = 0.0;
    if (ser_relative_score(1.0, 2.0, 2.0, &score) != SER_STATUS_DIVISION_BY_ZERO) {
        return 1;
    }
    return 0;
}
