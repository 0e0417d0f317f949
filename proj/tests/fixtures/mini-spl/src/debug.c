#include "util.h"

#ifndef CONFIG_NET
static const char *mode = "local";
#endif

#ifdef CONFIG_LEGACY
void dump_legacy_state(void) {}
#endif
