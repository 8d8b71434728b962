#pragma once

#include <stdexcept>
#include <string>

namespace tgs {

// Base for every error the library raises. The category lets the CLI map
// failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    enum class Kind {
        parse,
        validation,
        format,
        degenerate,
        argument,
        io,
        config,
        consistency,
        sequencing,
        dimension,
        missing_embedding,
    };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

#define TGS_DEFINE_ERROR(Name, KindValue)                                             \
    class Name : public Error {                                                       \
    public:                                                                           \
        explicit Name(const std::string& what) : Error(Kind::KindValue, what) {}      \
    };

TGS_DEFINE_ERROR(ParseError, parse)
TGS_DEFINE_ERROR(ValidationError, validation)
TGS_DEFINE_ERROR(FormatError, format)
TGS_DEFINE_ERROR(DegenerateError, degenerate)
TGS_DEFINE_ERROR(ArgumentError, argument)
TGS_DEFINE_ERROR(IoError, io)
TGS_DEFINE_ERROR(ConfigError, config)
TGS_DEFINE_ERROR(ConsistencyError, consistency)
TGS_DEFINE_ERROR(SequencingError, sequencing)
TGS_DEFINE_ERROR(DimensionError, dimension)
TGS_DEFINE_ERROR(MissingEmbeddingError, missing_embedding)

#undef TGS_DEFINE_ERROR

}  // namespace tgs
