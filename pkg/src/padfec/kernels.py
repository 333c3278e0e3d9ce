"""Hot kernels: AES-128 rounds, guess-pattern successors, decode loops.

Everything in this module is integer/byte arithmetic, so the numba backend
and the interpreted numpy fallback (``PADFEC_BACKEND=numpy``) produce
bit-identical outputs. Floating-point work (noise generation, reliability
sorting) happens in the callers and arrives here as precomputed arrays.

Blocks are flat 16-byte arrays in FIPS-197 order: byte i holds state cell
(row i mod 4, column i div 4); bit 0 of a 128-bit word is the MSB of byte 0.
"""

import numpy as np

from .backend import njit

# ---------------------------------------------------------------------------
# AES-128 tables. MUL* are GF(2^8) multiply-by-constant lookup tables.

AES_SBOX = np.array([
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
], dtype=np.uint8)

AES_INV_SBOX = np.zeros(256, dtype=np.uint8)
AES_INV_SBOX[AES_SBOX] = np.arange(256, dtype=np.uint8)


def _gf_mul_table(c: int) -> np.ndarray:
    out = np.zeros(256, dtype=np.uint8)
    for a in range(256):
        x, b, r = a, c, 0
        while b:
            if b & 1:
                r ^= x
            x <<= 1
            if x & 0x100:
                x ^= 0x11B
            b >>= 1
        out[a] = r
    return out


MUL2 = _gf_mul_table(2)
MUL3 = _gf_mul_table(3)
MUL9 = _gf_mul_table(9)
MUL11 = _gf_mul_table(11)
MUL13 = _gf_mul_table(13)
MUL14 = _gf_mul_table(14)

POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)
BIT_MSB = np.array([0x80 >> i for i in range(8)], dtype=np.uint8)


# ---------------------------------------------------------------------------
# AES-128 block primitives. rk is the (11, 16) uint8 expanded key schedule.

@njit
def aes_encrypt_into(out, block, rk, tmp):
    # out, tmp: uint8[16] scratch; block is left untouched and must not alias out.
    for i in range(16):
        out[i] = block[i] ^ rk[0, i]
    for rnd in range(1, 10):
        # SubBytes + ShiftRows (row r rotates left by r)
        for c in range(4):
            for r in range(4):
                tmp[r + 4 * c] = AES_SBOX[out[r + 4 * ((c + r) & 3)]]
        # MixColumns + AddRoundKey
        for c in range(4):
            a0 = tmp[4 * c]
            a1 = tmp[4 * c + 1]
            a2 = tmp[4 * c + 2]
            a3 = tmp[4 * c + 3]
            out[4 * c + 0] = MUL2[a0] ^ MUL3[a1] ^ a2 ^ a3 ^ rk[rnd, 4 * c + 0]
            out[4 * c + 1] = a0 ^ MUL2[a1] ^ MUL3[a2] ^ a3 ^ rk[rnd, 4 * c + 1]
            out[4 * c + 2] = a0 ^ a1 ^ MUL2[a2] ^ MUL3[a3] ^ rk[rnd, 4 * c + 2]
            out[4 * c + 3] = MUL3[a0] ^ a1 ^ a2 ^ MUL2[a3] ^ rk[rnd, 4 * c + 3]
    for c in range(4):
        for r in range(4):
            tmp[r + 4 * c] = AES_SBOX[out[r + 4 * ((c + r) & 3)]]
    for i in range(16):
        out[i] = tmp[i] ^ rk[10, i]


@njit
def aes_decrypt_into(out, block, rk, tmp):
    for i in range(16):
        out[i] = block[i] ^ rk[10, i]
    for rnd in range(9, 0, -1):
        # InvShiftRows (row r rotates right by r) + InvSubBytes + AddRoundKey
        for c in range(4):
            for r in range(4):
                tmp[r + 4 * c] = AES_INV_SBOX[out[r + 4 * ((c - r) & 3)]] ^ rk[rnd, r + 4 * c]
        # InvMixColumns
        for c in range(4):
            a0 = tmp[4 * c]
            a1 = tmp[4 * c + 1]
            a2 = tmp[4 * c + 2]
            a3 = tmp[4 * c + 3]
            out[4 * c + 0] = MUL14[a0] ^ MUL11[a1] ^ MUL13[a2] ^ MUL9[a3]
            out[4 * c + 1] = MUL9[a0] ^ MUL14[a1] ^ MUL11[a2] ^ MUL13[a3]
            out[4 * c + 2] = MUL13[a0] ^ MUL9[a1] ^ MUL14[a2] ^ MUL11[a3]
            out[4 * c + 3] = MUL11[a0] ^ MUL13[a1] ^ MUL9[a2] ^ MUL14[a3]
    for c in range(4):
        for r in range(4):
            tmp[r + 4 * c] = AES_INV_SBOX[out[r + 4 * ((c - r) & 3)]]
    for i in range(16):
        out[i] = tmp[i] ^ rk[0, i]


@njit
def encrypt_blocks(blocks, rk):
    out = np.empty_like(blocks)
    tmp = np.empty(16, np.uint8)
    for b in range(blocks.shape[0]):
        aes_encrypt_into(out[b], blocks[b], rk, tmp)
    return out


@njit
def decrypt_blocks(blocks, rk):
    out = np.empty_like(blocks)
    tmp = np.empty(16, np.uint8)
    for b in range(blocks.shape[0]):
        aes_decrypt_into(out[b], blocks[b], rk, tmp)
    return out


# ---------------------------------------------------------------------------
# Guess-pattern successors.
#
# Logistic-weight order enumerates, for each weight L = 0, 1, 2, ..., the
# partitions of L into distinct parts (the flipped reliability ranks). Order
# within a weight: start from the single-part partition and repeatedly shift
# mass from the deepest part that can still step down, refilling the tail
# greedily largest-first. A partition of R into distinct parts all <= c
# exists iff R <= c(c+1)/2; that bound drives every feasibility check here.

@njit
def partition_fill(parts, idx, remainder, cap):
    # precondition: remainder <= cap*(cap+1)//2
    while remainder > 0:
        v = cap if cap < remainder else remainder
        parts[idx] = v
        idx += 1
        remainder -= v
        cap = v - 1
    return idx


@njit
def partition_first(parts, weight, cap):
    if weight > cap * (cap + 1) // 2:
        return -1
    return partition_fill(parts, 0, weight, cap)


@njit
def partition_next(parts, count):
    # Successor among distinct partitions of the same weight; -1 = exhausted.
    suffix = 0
    for i in range(count - 1, -1, -1):
        suffix += parts[i]
        v = parts[i] - 1
        if v >= 1 and suffix - v <= v * (v - 1) // 2:
            parts[i] = v
            return partition_fill(parts, i + 1, suffix - v, v - 1)
    return -1


@njit
def combo_first(parts, size):
    for i in range(size):
        parts[i] = i + 1
    return size


@njit
def combo_next(parts, size, n):
    # Next size-combination of {1..n} in lexicographic order; -1 = exhausted.
    i = size - 1
    while i >= 0 and parts[i] == n - (size - 1 - i):
        i -= 1
    if i < 0:
        return -1
    parts[i] += 1
    for t in range(i + 1, size):
        parts[t] = parts[t - 1] + 1
    return size


ORDER_LOGISTIC = 0
ORDER_HAMMING = 1


@njit
def pattern_advance(parts, count, weight, n, mode):
    """Step past the pattern held in parts[:count]; returns (count, weight).

    count == -1 signals that all 2**n patterns have been emitted. The empty
    pattern is the initial state (count=0, weight=0) and is not re-emitted.
    mode 0 orders by logistic weight (sum of ranks), mode 1 by Hamming weight.
    """
    if mode == ORDER_LOGISTIC:
        c = partition_next(parts, count)
        if c >= 0:
            return c, weight
        w = weight + 1
        if w > n * (n + 1) // 2:
            return -1, weight
        return partition_first(parts, w, n), w
    c = combo_next(parts, count, n)
    if c >= 0:
        return c, weight
    w = weight + 1
    if w > n:
        return -1, weight
    return combo_first(parts, w), w


# ---------------------------------------------------------------------------
# Membership predicates and bit accounting.

@njit
def masked_eq(block, mask, expect):
    # expect must be pre-masked
    for i in range(16):
        if block[i] & mask[i] != expect[i]:
            return False
    return True


@njit
def masked_diff_bits(a, b, mask):
    d = 0
    for i in range(16):
        d += POP8[(a[i] ^ b[i]) & mask[i]]
    return d


@njit
def diff_bits(a, b):
    d = 0
    for i in range(a.shape[0]):
        d += POP8[a[i] ^ b[i]]
    return d


# ---------------------------------------------------------------------------
# Batch decode loops. Inputs are one row per trial; outputs are per-trial
# counters that the harness reduces with plain integer sums.

@njit
def joint_decode_batch(hard_bytes, perms, rk, pad_mask, pad_expect,
                       payload_mask, true_plain, tx_bytes, max_queries, mode):
    """Padding-membership guess loop (decrypt, check pad) per received block.

    hard_bytes: (B,16) hard-decision blocks; perms: (B,n) rank -> bit position;
    true_plain/tx_bytes: (B,16) transmitted plaintext/ciphertext for error
    accounting. Returns per-trial (queries, block_err, undetected, abandoned,
    chan_bit_err, payload_bit_err).
    """
    B = hard_bytes.shape[0]
    n = perms.shape[1]
    queries = np.zeros(B, np.int64)
    block_err = np.zeros(B, np.uint8)
    undetected = np.zeros(B, np.uint8)
    abandoned = np.zeros(B, np.uint8)
    chan_bit_err = np.zeros(B, np.int64)
    payload_bit_err = np.zeros(B, np.int64)

    parts = np.empty(n, np.int64)
    cand = np.empty(16, np.uint8)
    plain = np.empty(16, np.uint8)
    first_plain = np.empty(16, np.uint8)
    tmp = np.empty(16, np.uint8)

    for b in range(B):
        for i in range(16):
            cand[i] = hard_bytes[b, i]
        # hard-decision decrypt doubles as the abandonment fallback extraction
        aes_decrypt_into(plain, cand, rk, tmp)
        for i in range(16):
            first_plain[i] = plain[i]
        found = False
        q = 0
        if max_queries >= 1:
            q = 1
            found = masked_eq(plain, pad_mask, pad_expect)
            count = 0
            weight = 0
            while not found and q < max_queries:
                count, weight = pattern_advance(parts, count, weight, n, mode)
                if count < 0:
                    break
                for i in range(16):
                    cand[i] = hard_bytes[b, i]
                for t in range(count):
                    pos = perms[b, parts[t] - 1]
                    cand[pos >> 3] ^= BIT_MSB[pos & 7]
                aes_decrypt_into(plain, cand, rk, tmp)
                q += 1
                found = masked_eq(plain, pad_mask, pad_expect)
        queries[b] = q
        if found:
            d = diff_bits(cand, tx_bytes[b])
            if d > 0:
                block_err[b] = 1
                undetected[b] = 1
                chan_bit_err[b] = d
                payload_bit_err[b] = masked_diff_bits(plain, true_plain[b], payload_mask)
        else:
            abandoned[b] = 1
            block_err[b] = 1
            chan_bit_err[b] = diff_bits(hard_bytes[b], tx_bytes[b])
            payload_bit_err[b] = masked_diff_bits(first_plain, true_plain[b], payload_mask)
    return queries, block_err, undetected, abandoned, chan_bit_err, payload_bit_err


@njit
def syndrome_decode_batch(hard_bits, perms, hcols, tx_bits, msg_len,
                          max_queries, mode):
    """Zero-syndrome guess loop per received word.

    hard_bits/tx_bits: (B,n) 0/1 arrays; hcols: (n,) int64 bitmasks of the
    parity-check columns. Returns per-trial counters plus the decided message
    bits (systematic prefix of length msg_len).
    """
    B = hard_bits.shape[0]
    n = hard_bits.shape[1]
    queries = np.zeros(B, np.int64)
    block_err = np.zeros(B, np.uint8)
    undetected = np.zeros(B, np.uint8)
    abandoned = np.zeros(B, np.uint8)
    chan_bit_err = np.zeros(B, np.int64)
    decided_msg = np.zeros((B, msg_len), np.uint8)

    parts = np.empty(n, np.int64)
    decided = np.empty(n, np.uint8)

    for b in range(B):
        s0 = np.int64(0)
        for pos in range(n):
            if hard_bits[b, pos] != 0:
                s0 ^= hcols[pos]
        found = False
        count = 0
        weight = 0
        q = 0
        if max_queries >= 1:
            q = 1
            found = s0 == 0
            while not found and q < max_queries:
                count, weight = pattern_advance(parts, count, weight, n, mode)
                if count < 0:
                    break
                s = s0
                for t in range(count):
                    s ^= hcols[perms[b, parts[t] - 1]]
                q += 1
                found = s == 0
        queries[b] = q
        for i in range(n):
            decided[i] = hard_bits[b, i]
        if found:
            for t in range(count):
                pos = perms[b, parts[t] - 1]
                decided[pos] ^= 1
        else:
            abandoned[b] = 1
            block_err[b] = 1
        d = 0
        for i in range(n):
            if decided[i] != tx_bits[b, i]:
                d += 1
        chan_bit_err[b] = d
        if found and d > 0:
            block_err[b] = 1
            undetected[b] = 1
        for i in range(msg_len):
            decided_msg[b, i] = decided[i]
    return queries, block_err, undetected, abandoned, chan_bit_err, decided_msg
