#pragma once

#include <stdexcept>
#include <string>

namespace bitmix {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define BITMIX_DEFINE_ERROR(Name)                                          \
    struct Name : Error {                                                  \
        using Error::Error;                                                \
    }

// image / PGM
BITMIX_DEFINE_ERROR(MalformedHeader);
BITMIX_DEFINE_ERROR(TruncatedData);
BITMIX_DEFINE_ERROR(UnsupportedMaxval);
BITMIX_DEFINE_ERROR(DimensionMismatch);

// stego simulator
BITMIX_DEFINE_ERROR(OutOfRange);
BITMIX_DEFINE_ERROR(DegenerateOutput);
BITMIX_DEFINE_ERROR(FlatImage);

// augmentation
BITMIX_DEFINE_ERROR(BoxOutOfBounds);
BITMIX_DEFINE_ERROR(ZeroDenominator);
BITMIX_DEFINE_ERROR(EmptyBatch);

// stats
BITMIX_DEFINE_ERROR(SingleClass);
BITMIX_DEFINE_ERROR(NoSamplesInBand);

// batch container
BITMIX_DEFINE_ERROR(MixedPixelKinds);
BITMIX_DEFINE_ERROR(MixedDimensions);
BITMIX_DEFINE_ERROR(BadMagic);
BITMIX_DEFINE_ERROR(UnsupportedVersion);
BITMIX_DEFINE_ERROR(Truncated);
BITMIX_DEFINE_ERROR(LabelOutOfRange);
BITMIX_DEFINE_ERROR(MalformedContainer);

#undef BITMIX_DEFINE_ERROR

}  // namespace bitmix
