#if
int a;
#endif
