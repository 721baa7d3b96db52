"""Signalling-overhead chain evaluated step by step, independent of the
package's closed-form expression."""


def overhead_reference(header_bits, check_factor, symbols_per_packet,
                       bits_per_symbol, ber):
    if bits_per_symbol == 0:
        return 0.0
    symbol_error = 1.0 - (1.0 - ber) ** bits_per_symbol
    check_symbols = check_factor * symbols_per_packet * symbol_error
    payload_bits = bits_per_symbol * symbols_per_packet
    return (header_bits + bits_per_symbol * check_symbols) / payload_bits
