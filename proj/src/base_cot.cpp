#include "ironman/base_cot.hpp"

namespace ironman {

DealerOutput dealer_generate(std::size_t count, Delta delta, Block seed) {
    if (count < 1) throw std::invalid_argument("dealer_generate: count must be >= 1");
    PrgStream block_stream(crhf(seed, tweaks::make(0, tweaks::kDealer, 0)));
    PrgStream bit_stream(crhf(seed, tweaks::make(0, tweaks::kDealer, 1)));

    std::vector<Block> r0(count);
    BitVec bits(count);
    std::vector<Block> rb(count);
    for (std::size_t i = 0; i < count; ++i) {
        r0[i] = block_stream.next_block();
        bool b = bit_stream.next_u8() & 1;
        bits.set(i, b);
        rb[i] = b ? r0[i] ^ delta.value : r0[i];
    }
    return DealerOutput{SenderCotPool(delta, std::move(r0)),
                        ReceiverCotPool(std::move(bits), std::move(rb))};
}

OtCiphertexts ot_send(SenderCotPool& pool, Block m0, Block m1, int d, std::uint64_t tweak) {
    Block r0 = pool.next();
    Block r1 = r0 ^ pool.delta().value;
    Block rd0 = (d & 1) ? r1 : r0;  // r_{0⊕d}
    Block rd1 = (d & 1) ? r0 : r1;  // r_{1⊕d}
    return OtCiphertexts{m0 ^ crhf(rd0, tweak), m1 ^ crhf(rd1, tweak)};
}

OtReceiver ot_receive(ReceiverCotPool& pool, int choice, std::uint64_t tweak) {
    auto e = pool.next();
    OtReceiver r;
    r.d = (e.b ? 1 : 0) ^ (choice & 1);
    r.choice = choice & 1;
    r.rb = e.rb;
    r.tweak = tweak;
    return r;
}

std::pair<SenderCotPool, SenderBatch> pool_reserve(SenderBatch batch, std::size_t count) {
    if (count > batch.w.size()) throw std::invalid_argument("pool_reserve: insufficient batch length");
    std::vector<Block> reserved(batch.w.begin(), batch.w.begin() + static_cast<long>(count));
    SenderBatch rest{batch.delta, {batch.w.begin() + static_cast<long>(count), batch.w.end()}};
    return {SenderCotPool(batch.delta, std::move(reserved)), std::move(rest)};
}

std::pair<ReceiverCotPool, ReceiverBatch> pool_reserve(ReceiverBatch batch, std::size_t count) {
    if (count > batch.y.size()) throw std::invalid_argument("pool_reserve: insufficient batch length");
    BitVec rbits(count);
    for (std::size_t i = 0; i < count; ++i) rbits.set(i, batch.x.get(i));
    std::vector<Block> rblocks(batch.y.begin(), batch.y.begin() + static_cast<long>(count));

    std::size_t rest_n = batch.y.size() - count;
    ReceiverBatch rest;
    rest.x = BitVec(rest_n);
    for (std::size_t i = 0; i < rest_n; ++i) rest.x.set(i, batch.x.get(count + i));
    rest.y.assign(batch.y.begin() + static_cast<long>(count), batch.y.end());
    return {ReceiverCotPool(std::move(rbits), std::move(rblocks)), std::move(rest)};
}

}  // namespace ironman
