#include "passguess/error.hpp"

namespace passguess {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::EmptyCorpus: return "empty_corpus";
        case Errc::EmptyTable: return "empty_table";
        case Errc::EmptyPhrase: return "empty_phrase";
        case Errc::BadArity: return "bad_arity";
        case Errc::BadAlpha: return "bad_alpha";
        case Errc::ParseError: return "parse_error";
        case Errc::StoreMissing: return "store_missing";
        case Errc::Io: return "io_error";
        case Errc::InvalidArgument: return "invalid_argument";
    }
    return "unknown";
}

}  // namespace passguess
