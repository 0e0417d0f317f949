#include "util.h"

#if API_VERSION > 2
int compat_shim(void) { return 0; }
#endif

#ifdef CONFIG_CRYPTO
int checksum(int x) { return x ^ 0x5a; }
#endif
